// normalize.hpp
//
// Reverses the text-obscuring tricks found in spam bodies: HTML
// comments spliced into words, bogus tags, single punctuation marks
// buried between letters, accented look-alike letters and a small set
// of digit-for-letter substitutions.  The output is a lowercase
// canonical string plus counts of what each stage removed; tokenize()
// turns it into the [a-z0-9]+ token stream every downstream statistic
// counts.

#ifndef SPAMDRIFT_NORMALIZE_HPP
#define SPAMDRIFT_NORMALIZE_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace spamdrift {

enum class Marker : std::size_t {
    HtmlComment = 0,
    BogusTag = 1,
    InWordPunct = 2,
    Diacritic = 3,
};

inline constexpr std::size_t kMarkerCount = 4;

const char* to_string(Marker m);

struct NormalizedText {
    std::string text;
    std::array<std::size_t, kMarkerCount> removed{};

    std::size_t removed_count(Marker m) const {
        return removed[static_cast<std::size_t>(m)];
    }
    std::size_t removed_total() const;
};

struct NormalizeConfig {
    /// digit -> letter substitutions undone inside otherwise-alphabetic
    /// words with at least two letters
    std::map<char, char> leet_map = {{'0', 'o'}, {'1', 'l'}, {'3', 'e'}};
    /// tag names that render as whitespace and are replaced by a space
    /// instead of being deleted outright
    std::set<std::string> whitespace_tags = {"br", "p", "div"};
    /// a "<...>" span longer than this without a closing ">" is
    /// treated as literal text
    std::size_t tag_span_limit = 64;
};

/// reads a config table: one mapping per line, either
/// "leet <digit> <letter>" or "wstag <name>"; '#' starts a comment.
/// Entries replace the built-in defaults.
NormalizeConfig load_normalize_config(std::istream& in);

/// deletes every <!-- ... --> span with zero replacement so split
/// words rejoin; an unterminated comment is deleted to end of text
std::string strip_html_comments(std::string_view text,
                                std::size_t* removed = nullptr);

/// deletes <...> tag spans with zero replacement, except
/// whitespace-equivalent tags (config list) which become one space.
/// "<" not followed by an optional "/" and a letter is literal text,
/// as is a span exceeding the tag length limit.
std::string strip_bogus_tags(std::string_view text,
                             const NormalizeConfig& cfg = {},
                             std::size_t* removed = nullptr);

/// maps accented Latin letters to their ASCII base letter, drops
/// combining marks, and undoes leet digits per the config map
std::string fold_diacritics(std::string_view text,
                            const NormalizeConfig& cfg = {},
                            std::size_t* folded = nullptr);

/// deletes a length-1 run of {. | - _ * ' `} when it sits between two
/// letters; longer runs and sentence punctuation are preserved
std::string collapse_inword_punct(std::string_view text,
                                  std::size_t* removed = nullptr);

std::string lowercase_ascii(std::string_view text);

/// full pipeline: comments, tags, diacritics, in-word punctuation,
/// lowercase — in that order
NormalizedText normalize(std::string_view text, const NormalizeConfig& cfg = {});

/// maximal [a-z0-9]+ runs of the canonical text, in order
std::vector<std::string> tokenize(const NormalizedText& n);

/// normalize + tokenize in one step
std::vector<std::string> tokenize(std::string_view raw_text,
                                  const NormalizeConfig& cfg = {});

/// marker counts as CSV (category, count)
void write_marker_csv(const std::array<std::size_t, kMarkerCount>& counts,
                      std::ostream& out);

}  // namespace spamdrift

#endif  // SPAMDRIFT_NORMALIZE_HPP
