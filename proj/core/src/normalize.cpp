#include "spamdrift/normalize.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spamdrift {

namespace {

bool is_ascii_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Latin-1 supplement + Latin extended-A letters mapped to their ASCII
// base form.  Codepoints outside the table pass through untouched.
struct FoldEntry {
    unsigned cp;
    const char* base;
};

constexpr FoldEntry kFoldTable[] = {
    {0x00C0, "A"}, {0x00C1, "A"}, {0x00C2, "A"}, {0x00C3, "A"}, {0x00C4, "A"}, {0x00C5, "A"},
    {0x00C6, "AE"}, {0x00C7, "C"}, {0x00C8, "E"}, {0x00C9, "E"}, {0x00CA, "E"}, {0x00CB, "E"},
    {0x00CC, "I"}, {0x00CD, "I"}, {0x00CE, "I"}, {0x00CF, "I"}, {0x00D0, "D"}, {0x00D1, "N"},
    {0x00D2, "O"}, {0x00D3, "O"}, {0x00D4, "O"}, {0x00D5, "O"}, {0x00D6, "O"}, {0x00D8, "O"},
    {0x00D9, "U"}, {0x00DA, "U"}, {0x00DB, "U"}, {0x00DC, "U"}, {0x00DD, "Y"}, {0x00DE, "TH"},
    {0x00DF, "ss"}, {0x00E0, "a"}, {0x00E1, "a"}, {0x00E2, "a"}, {0x00E3, "a"}, {0x00E4, "a"},
    {0x00E5, "a"}, {0x00E6, "ae"}, {0x00E7, "c"}, {0x00E8, "e"}, {0x00E9, "e"}, {0x00EA, "e"},
    {0x00EB, "e"}, {0x00EC, "i"}, {0x00ED, "i"}, {0x00EE, "i"}, {0x00EF, "i"}, {0x00F0, "d"},
    {0x00F1, "n"}, {0x00F2, "o"}, {0x00F3, "o"}, {0x00F4, "o"}, {0x00F5, "o"}, {0x00F6, "o"},
    {0x00F8, "o"}, {0x00F9, "u"}, {0x00FA, "u"}, {0x00FB, "u"}, {0x00FC, "u"}, {0x00FD, "y"},
    {0x00FE, "th"}, {0x00FF, "y"}, {0x0100, "A"}, {0x0101, "a"}, {0x0102, "A"}, {0x0103, "a"},
    {0x0104, "A"}, {0x0105, "a"}, {0x0106, "C"}, {0x0107, "c"}, {0x0108, "C"}, {0x0109, "c"},
    {0x010A, "C"}, {0x010B, "c"}, {0x010C, "C"}, {0x010D, "c"}, {0x010E, "D"}, {0x010F, "d"},
    {0x0110, "D"}, {0x0111, "d"}, {0x0112, "E"}, {0x0113, "e"}, {0x0114, "E"}, {0x0115, "e"},
    {0x0116, "E"}, {0x0117, "e"}, {0x0118, "E"}, {0x0119, "e"}, {0x011A, "E"}, {0x011B, "e"},
    {0x011C, "G"}, {0x011D, "g"}, {0x011E, "G"}, {0x011F, "g"}, {0x0120, "G"}, {0x0121, "g"},
    {0x0122, "G"}, {0x0123, "g"}, {0x0124, "H"}, {0x0125, "h"}, {0x0126, "H"}, {0x0127, "h"},
    {0x0128, "I"}, {0x0129, "i"}, {0x012A, "I"}, {0x012B, "i"}, {0x012C, "I"}, {0x012D, "i"},
    {0x012E, "I"}, {0x012F, "i"}, {0x0130, "I"}, {0x0131, "i"}, {0x0132, "IJ"}, {0x0133, "ij"},
    {0x0134, "J"}, {0x0135, "j"}, {0x0136, "K"}, {0x0137, "k"}, {0x0138, "k"}, {0x0139, "L"},
    {0x013A, "l"}, {0x013B, "L"}, {0x013C, "l"}, {0x013D, "L"}, {0x013E, "l"}, {0x013F, "L"},
    {0x0140, "l"}, {0x0141, "L"}, {0x0142, "l"}, {0x0143, "N"}, {0x0144, "n"}, {0x0145, "N"},
    {0x0146, "n"}, {0x0147, "N"}, {0x0148, "n"}, {0x0149, "n"}, {0x014A, "NG"}, {0x014B, "ng"},
    {0x014C, "O"}, {0x014D, "o"}, {0x014E, "O"}, {0x014F, "o"}, {0x0150, "O"}, {0x0151, "o"},
    {0x0152, "OE"}, {0x0153, "oe"}, {0x0154, "R"}, {0x0155, "r"}, {0x0156, "R"}, {0x0157, "r"},
    {0x0158, "R"}, {0x0159, "r"}, {0x015A, "S"}, {0x015B, "s"}, {0x015C, "S"}, {0x015D, "s"},
    {0x015E, "S"}, {0x015F, "s"}, {0x0160, "S"}, {0x0161, "s"}, {0x0162, "T"}, {0x0163, "t"},
    {0x0164, "T"}, {0x0165, "t"}, {0x0166, "T"}, {0x0167, "t"}, {0x0168, "U"}, {0x0169, "u"},
    {0x016A, "U"}, {0x016B, "u"}, {0x016C, "U"}, {0x016D, "u"}, {0x016E, "U"}, {0x016F, "u"},
    {0x0170, "U"}, {0x0171, "u"}, {0x0172, "U"}, {0x0173, "u"}, {0x0174, "W"}, {0x0175, "w"},
    {0x0176, "Y"}, {0x0177, "y"}, {0x0178, "Y"}, {0x0179, "Z"}, {0x017A, "z"}, {0x017B, "Z"},
    {0x017C, "z"}, {0x017D, "Z"}, {0x017E, "z"},
};

const char* fold_lookup(unsigned cp) {
    std::size_t lo = 0;
    std::size_t hi = sizeof(kFoldTable) / sizeof(kFoldTable[0]);
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (kFoldTable[mid].cp < cp) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < sizeof(kFoldTable) / sizeof(kFoldTable[0]) && kFoldTable[lo].cp == cp) {
        return kFoldTable[lo].base;
    }
    return nullptr;
}

/// decodes one UTF-8 sequence at text[i]; returns the codepoint and
/// advances len.  A malformed sequence yields the raw byte value with
/// len 1 so it round-trips verbatim.
unsigned decode_utf8(std::string_view text, std::size_t i, std::size_t& len) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    len = 1;
    if (b0 < 0x80) return b0;
    unsigned cp = 0;
    std::size_t need = 0;
    if ((b0 & 0xE0) == 0xC0) {
        cp = b0 & 0x1F;
        need = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
        cp = b0 & 0x0F;
        need = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
        cp = b0 & 0x07;
        need = 3;
    } else {
        return b0;  // stray continuation or invalid lead byte
    }
    if (i + need >= text.size()) {
        return b0;  // truncated sequence
    }
    for (std::size_t k = 1; k <= need; ++k) {
        unsigned char bk = static_cast<unsigned char>(text[i + k]);
        if ((bk & 0xC0) != 0x80) return b0;
        cp = (cp << 6) | (bk & 0x3F);
    }
    len = need + 1;
    return cp;
}

void encode_utf8(unsigned cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_inword_punct(char c) {
    switch (c) {
        case '.':
        case '|':
        case '-':
        case '_':
        case '*':
        case '\'':
        case '`':
            return true;
        default:
            return false;
    }
}

}  // namespace

const char* to_string(Marker m) {
    switch (m) {
        case Marker::HtmlComment: return "html_comment";
        case Marker::BogusTag: return "bogus_tag";
        case Marker::InWordPunct: return "inword_punct";
        case Marker::Diacritic: return "diacritic";
    }
    return "unknown";
}

std::size_t NormalizedText::removed_total() const {
    std::size_t total = 0;
    for (std::size_t c : removed) total += c;
    return total;
}

NormalizeConfig load_normalize_config(std::istream& in) {
    NormalizeConfig cfg;
    bool saw_leet = false;
    bool saw_wstag = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;  // blank
        if (kind == "leet") {
            std::string from, to;
            if (!(ls >> from >> to) || from.size() != 1 || to.size() != 1 ||
                !is_ascii_digit(from[0]) || !is_ascii_letter(to[0])) {
                throw std::runtime_error("bad leet entry at line " +
                                         std::to_string(lineno));
            }
            if (!saw_leet) {
                cfg.leet_map.clear();
                saw_leet = true;
            }
            cfg.leet_map[from[0]] = ascii_lower(to[0]);
        } else if (kind == "wstag") {
            std::string name;
            if (!(ls >> name)) {
                throw std::runtime_error("bad wstag entry at line " +
                                         std::to_string(lineno));
            }
            for (char& c : name) c = ascii_lower(c);
            if (!saw_wstag) {
                cfg.whitespace_tags.clear();
                saw_wstag = true;
            }
            cfg.whitespace_tags.insert(name);
        } else {
            throw std::runtime_error("unknown entry '" + kind + "' at line " +
                                     std::to_string(lineno));
        }
    }
    return cfg;
}

std::string strip_html_comments(std::string_view text, std::size_t* removed) {
    std::string out;
    out.reserve(text.size());
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 4, "<!--") == 0) {
            std::size_t end = text.find("-->", i + 4);
            ++count;
            if (end == std::string_view::npos) {
                break;  // unterminated comment swallows the rest
            }
            i = end + 3;
            continue;
        }
        out.push_back(text[i]);
        ++i;
    }
    if (removed) *removed = count;
    return out;
}

std::string strip_bogus_tags(std::string_view text, const NormalizeConfig& cfg,
                             std::size_t* removed) {
    std::string out;
    out.reserve(text.size());
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c != '<') {
            out.push_back(c);
            ++i;
            continue;
        }
        // a tag candidate is '<', an optional '/', then a letter;
        // anything else ("a < b", "<3") is literal text
        std::size_t name_at = i + 1;
        if (name_at < text.size() && text[name_at] == '/') ++name_at;
        if (name_at >= text.size() || !is_ascii_letter(text[name_at])) {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t close = std::string_view::npos;
        std::size_t limit = std::min(text.size(), i + cfg.tag_span_limit);
        for (std::size_t j = name_at; j < limit; ++j) {
            if (text[j] == '>') {
                close = j;
                break;
            }
            if (text[j] == '<') break;  // nested '<' restarts the scan there
        }
        if (close == std::string_view::npos) {
            out.push_back(c);
            ++i;
            continue;
        }
        std::string name;
        for (std::size_t j = name_at;
             j < close && (is_ascii_letter(text[j]) || is_ascii_digit(text[j]));
             ++j) {
            name.push_back(ascii_lower(text[j]));
        }
        ++count;
        if (cfg.whitespace_tags.count(name)) {
            out.push_back(' ');
        }
        i = close + 1;
    }
    if (removed) *removed = count;
    return out;
}

std::string fold_diacritics(std::string_view text, const NormalizeConfig& cfg,
                            std::size_t* folded) {
    std::size_t count = 0;

    // pass 1: codepoint-level folding of accented letters and
    // combining marks
    std::string flat;
    flat.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t len = 1;
        unsigned cp = decode_utf8(text, i, len);
        if (cp < 0x80) {
            flat.push_back(static_cast<char>(cp));
        } else if (len == 1) {
            // malformed byte: decode_utf8 hands it back raw; re-encoding
            // or folding it would break the verbatim round trip
            flat.push_back(text[i]);
        } else if (const char* base = fold_lookup(cp)) {
            flat.append(base);
            ++count;
        } else if (cp >= 0x0300 && cp <= 0x036F) {
            ++count;  // combining mark: drop it
        } else {
            encode_utf8(cp, flat);
        }
        i += len;
    }

    // pass 2: undo digit-for-letter substitutions inside words made of
    // letters and mappable digits with at least two letters
    std::string out;
    out.reserve(flat.size());
    i = 0;
    while (i < flat.size()) {
        char c = flat[i];
        if (!is_ascii_letter(c) && !is_ascii_digit(c)) {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t j = i;
        std::size_t letters = 0;
        std::size_t mappable = 0;
        bool plain_digit = false;
        while (j < flat.size() &&
               (is_ascii_letter(flat[j]) || is_ascii_digit(flat[j]))) {
            if (is_ascii_letter(flat[j])) {
                ++letters;
            } else if (cfg.leet_map.count(flat[j])) {
                ++mappable;
            } else {
                plain_digit = true;
            }
            ++j;
        }
        if (letters >= 2 && mappable > 0 && !plain_digit) {
            for (std::size_t k = i; k < j; ++k) {
                if (auto it = cfg.leet_map.find(flat[k]); it != cfg.leet_map.end()) {
                    out.push_back(it->second);
                    ++count;
                } else {
                    out.push_back(flat[k]);
                }
            }
        } else {
            out.append(flat, i, j - i);
        }
        i = j;
    }
    if (folded) *folded = count;
    return out;
}

std::string collapse_inword_punct(std::string_view text, std::size_t* removed) {
    std::string out;
    out.reserve(text.size());
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (!is_inword_punct(c)) {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_inword_punct(text[j])) ++j;
        bool single = (j - i) == 1;
        bool between_letters = i > 0 && is_ascii_letter(text[i - 1]) &&
                               j < text.size() && is_ascii_letter(text[j]);
        if (single && between_letters) {
            ++count;  // drop it: the letters rejoin
        } else {
            out.append(text, i, j - i);
        }
        i = j;
    }
    if (removed) *removed = count;
    return out;
}

std::string lowercase_ascii(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = ascii_lower(c);
    return out;
}

NormalizedText normalize(std::string_view text, const NormalizeConfig& cfg) {
    NormalizedText n;
    std::size_t comments = 0, tags = 0, folds = 0, puncts = 0;
    // the stages run to a fixed point: collapsing punctuation can expose
    // a new leet word ("b.a1" -> "ba1" -> "bal"), folding a diacritic can
    // expose a new tag ("<e'>" -> "<e>"), and layered obfuscation stacks
    // these arbitrarily deep.  Every productive pass shrinks the text or
    // turns a digit into a letter, so the loop terminates.
    std::string s(text);
    while (true) {
        std::size_t c = 0, t = 0, f = 0, p = 0;
        std::string next = strip_html_comments(s, &c);
        next = strip_bogus_tags(next, cfg, &t);
        next = fold_diacritics(next, cfg, &f);
        next = collapse_inword_punct(next, &p);
        comments += c;
        tags += t;
        folds += f;
        puncts += p;
        if (next == s) break;
        s = std::move(next);
    }
    n.text = lowercase_ascii(s);
    n.removed[static_cast<std::size_t>(Marker::HtmlComment)] = comments;
    n.removed[static_cast<std::size_t>(Marker::BogusTag)] = tags;
    n.removed[static_cast<std::size_t>(Marker::Diacritic)] = folds;
    n.removed[static_cast<std::size_t>(Marker::InWordPunct)] = puncts;
    return n;
}

std::vector<std::string> tokenize(const NormalizedText& n) {
    std::vector<std::string> tokens;
    const std::string& t = n.text;
    std::size_t i = 0;
    while (i < t.size()) {
        if (!is_ascii_letter(t[i]) && !is_ascii_digit(t[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < t.size() && (is_ascii_letter(t[j]) || is_ascii_digit(t[j]))) ++j;
        tokens.emplace_back(t, i, j - i);
        i = j;
    }
    return tokens;
}

std::vector<std::string> tokenize(std::string_view raw_text,
                                  const NormalizeConfig& cfg) {
    return tokenize(normalize(raw_text, cfg));
}

void write_marker_csv(const std::array<std::size_t, kMarkerCount>& counts,
                      std::ostream& out) {
    out << "category,count\n";
    for (std::size_t m = 0; m < kMarkerCount; ++m) {
        out << to_string(static_cast<Marker>(m)) << ',' << counts[m] << '\n';
    }
}

}  // namespace spamdrift
