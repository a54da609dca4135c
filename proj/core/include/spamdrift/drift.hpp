// drift.hpp
//
// Week-by-week drift statistics: the p(spam) prior series and the
// chi-square term-burst matrix over weekly groups of messages.

#ifndef SPAMDRIFT_DRIFT_HPP
#define SPAMDRIFT_DRIFT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spamdrift/message.hpp"
#include "spamdrift/normalize.hpp"

namespace spamdrift {

struct PriorEntry {
    WeekKey week;
    std::uint64_t spam_count = 0;
    std::uint64_t legit_count = 0;
    /// empty when the week holds no messages at all
    std::optional<double> p_spam;
};

/// strictly ascending by week, gap-free
using WeekSeries = std::vector<PriorEntry>;

/// one entry per bucket; empty weeks carry an undefined prior rather
/// than 0
WeekSeries prior_series(const std::vector<WeekBucket>& buckets);

/// (min, max) over the defined entries; throws std::invalid_argument
/// when every entry is undefined
std::pair<double, double> series_range(const WeekSeries& s);

/// exponentially decayed running average of the defined priors;
/// decay == 0 is the identity (the default everywhere)
WeekSeries smooth_priors(const WeekSeries& s, double decay);

void write_priors_csv(const WeekSeries& s, std::ostream& out);
WeekSeries read_priors_csv(std::istream& in);

/// tokenized messages of one week; weeks are contiguous even when a
/// week contributed no documents
struct WeekDocs {
    WeekKey week;
    std::vector<std::vector<std::string>> docs;
};

/// tokenizes subject + body of each message with the given
/// normalization config and groups by ISO week, gap-filled.
/// label filter: only messages with this label enter (burst analysis
/// runs on the spam side); Unlabeled never matches.
std::vector<WeekDocs> group_week_docs(const std::vector<Message>& messages,
                                      Label keep = Label::Spam,
                                      const NormalizeConfig& cfg = {});

enum class CountMode {
    DocumentFrequency,  // messages containing the term (default)
    TokenFrequency,     // raw token occurrences
};

struct TermCountConfig {
    CountMode mode = CountMode::DocumentFrequency;
    /// terms totalling fewer occurrences than this across the whole
    /// span are dropped (they can never exceed the burst count floor)
    std::uint64_t min_total = 5;
};

struct TermWeekMatrix {
    std::vector<std::string> terms;
    std::vector<WeekKey> weeks;
    /// observed[t][w]
    std::vector<std::vector<std::uint64_t>> observed;
    /// per-term average weekly frequency
    std::vector<double> expected;
    /// per-week totals in the counting unit (documents or tokens);
    /// needed by the contingency-table statistic
    std::vector<std::uint64_t> week_totals;
    /// chi2[t][w], filled by chi2_bursts
    std::vector<std::vector<double>> chi2;
    /// burst[t][w], filled by chi2_bursts
    std::vector<std::vector<bool>> burst;
    /// terms removed because their expected value was zero
    std::vector<std::string> excluded;
};

/// counts term frequencies per week.  With an empty vocabulary the
/// vocabulary is every token whose total count passes cfg.min_total.
/// Throws std::invalid_argument on an empty corpus or when no term
/// survives the threshold.
TermWeekMatrix term_week_counts(const std::vector<WeekDocs>& weeks,
                                const std::vector<std::string>& vocabulary = {},
                                const TermCountConfig& cfg = {});

/// critical value for p < 0.01 at one degree of freedom
inline constexpr double kChi2Critical99 = 6.635;

enum class Chi2Mode {
    OneCell,         // (O - E)^2 / E goodness of fit (default)
    Contingency2x2,  // week-vs-rest x term-vs-rest contingency table
};

/// fills chi2 and burst.  A burst needs O > 4, O > E and chi2 at or
/// above the critical value.  Terms with E == 0 are moved to the
/// excluded list instead of dividing by zero.
TermWeekMatrix chi2_bursts(TermWeekMatrix m, Chi2Mode mode = Chi2Mode::OneCell);

/// bursts.csv: term, year, week, observed, expected, chi2, burst
void write_bursts_csv(const TermWeekMatrix& m, std::ostream& out);
TermWeekMatrix read_bursts_csv(std::istream& in);

}  // namespace spamdrift

#endif  // SPAMDRIFT_DRIFT_HPP
