#include "spamdrift/drift.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "spamdrift/csv.hpp"

namespace spamdrift {

namespace {

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        return static_cast<std::uint64_t>(std::stoull(s));
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad ") + what + " value '" + s + "'");
    }
}

int parse_int(const std::string& s, const char* what) {
    try {
        return std::stoi(s);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad ") + what + " value '" + s + "'");
    }
}

double parse_double(const std::string& s, const char* what) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad ") + what + " value '" + s + "'");
    }
}

}  // namespace

WeekSeries prior_series(const std::vector<WeekBucket>& buckets) {
    WeekSeries s;
    s.reserve(buckets.size());
    for (const WeekBucket& b : buckets) {
        PriorEntry e;
        e.week = b.week;
        e.spam_count = b.spam_count;
        e.legit_count = b.legit_count;
        std::uint64_t total = b.spam_count + b.legit_count;
        if (total > 0) {
            e.p_spam = static_cast<double>(b.spam_count) / static_cast<double>(total);
        }
        s.push_back(std::move(e));
    }
    return s;
}

std::pair<double, double> series_range(const WeekSeries& s) {
    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (const PriorEntry& e : s) {
        if (!e.p_spam) continue;
        if (!any) {
            lo = hi = *e.p_spam;
            any = true;
        } else {
            lo = std::min(lo, *e.p_spam);
            hi = std::max(hi, *e.p_spam);
        }
    }
    if (!any) {
        throw std::invalid_argument("prior series has no defined entries");
    }
    return {lo, hi};
}

WeekSeries smooth_priors(const WeekSeries& s, double decay) {
    if (!(decay >= 0.0 && decay < 1.0)) {
        throw std::invalid_argument("decay must lie in [0, 1)");
    }
    if (decay == 0.0) return s;
    WeekSeries out = s;
    bool seeded = false;
    double level = 0.0;
    for (PriorEntry& e : out) {
        if (!e.p_spam) continue;  // gaps stay gaps, never interpolated
        if (!seeded) {
            level = *e.p_spam;
            seeded = true;
        } else {
            level = decay * level + (1.0 - decay) * *e.p_spam;
        }
        e.p_spam = level;
    }
    return out;
}

void write_priors_csv(const WeekSeries& s, std::ostream& out) {
    CsvWriter w(out);
    w.row({"year", "week", "spam_count", "legit_count", "p_spam"});
    for (const PriorEntry& e : s) {
        w.field(e.week.year)
            .field(e.week.week)
            .field(e.spam_count)
            .field(e.legit_count)
            .field(e.p_spam ? *e.p_spam : nan_value());
        w.end_row();
    }
}

WeekSeries read_priors_csv(std::istream& in) {
    auto rows = read_csv_expect(
        in, {"year", "week", "spam_count", "legit_count", "p_spam"}, "priors csv");
    WeekSeries s;
    s.reserve(rows.size());
    for (const auto& r : rows) {
        PriorEntry e;
        e.week.year = parse_int(r[0], "year");
        e.week.week = parse_int(r[1], "week");
        e.spam_count = parse_u64(r[2], "spam_count");
        e.legit_count = parse_u64(r[3], "legit_count");
        if (!r[4].empty()) e.p_spam = parse_double(r[4], "p_spam");
        s.push_back(std::move(e));
    }
    return s;
}

std::vector<WeekDocs> group_week_docs(const std::vector<Message>& messages,
                                      Label keep, const NormalizeConfig& cfg) {
    std::map<WeekKey, std::vector<std::vector<std::string>>> grouped;
    for (const Message& m : messages) {
        if (m.label != keep || m.label == Label::Unlabeled) continue;
        grouped[iso_week_from_timestamp(m.timestamp)].push_back(
            tokenize(message_text(m), cfg));
    }
    std::vector<WeekDocs> out;
    if (grouped.empty()) return out;
    WeekKey wk = grouped.begin()->first;
    WeekKey last = grouped.rbegin()->first;
    while (true) {
        WeekDocs wd;
        wd.week = wk;
        if (auto it = grouped.find(wk); it != grouped.end()) {
            wd.docs = std::move(it->second);
        }
        out.push_back(std::move(wd));
        if (wk == last) break;
        wk = next_week(wk);
    }
    return out;
}

TermWeekMatrix term_week_counts(const std::vector<WeekDocs>& weeks,
                                const std::vector<std::string>& vocabulary,
                                const TermCountConfig& cfg) {
    if (weeks.empty()) {
        throw std::invalid_argument("empty corpus: no weeks to count over");
    }

    // per-week term counts in the configured unit
    std::vector<std::map<std::string, std::uint64_t>> counts(weeks.size());
    std::vector<std::uint64_t> week_totals(weeks.size(), 0);
    for (std::size_t w = 0; w < weeks.size(); ++w) {
        for (const auto& doc : weeks[w].docs) {
            if (cfg.mode == CountMode::DocumentFrequency) {
                std::set<std::string_view> seen(doc.begin(), doc.end());
                for (std::string_view t : seen) ++counts[w][std::string(t)];
                ++week_totals[w];
            } else {
                for (const std::string& t : doc) ++counts[w][t];
                week_totals[w] += doc.size();
            }
        }
    }

    TermWeekMatrix m;
    m.week_totals = std::move(week_totals);
    m.weeks.reserve(weeks.size());
    for (const WeekDocs& wd : weeks) m.weeks.push_back(wd.week);

    if (!vocabulary.empty()) {
        std::set<std::string> seen;
        for (const std::string& t : vocabulary) {
            if (seen.insert(t).second) m.terms.push_back(t);
        }
    } else {
        std::map<std::string, std::uint64_t> totals;
        for (const auto& weekly : counts) {
            for (const auto& [term, n] : weekly) totals[term] += n;
        }
        for (const auto& [term, n] : totals) {
            if (n >= cfg.min_total) m.terms.push_back(term);  // map order: sorted
        }
        if (m.terms.empty()) {
            throw std::invalid_argument(
                "no term passes the vocabulary threshold of " +
                std::to_string(cfg.min_total));
        }
    }

    m.observed.assign(m.terms.size(),
                      std::vector<std::uint64_t>(m.weeks.size(), 0));
    m.expected.assign(m.terms.size(), 0.0);
    m.chi2.assign(m.terms.size(), std::vector<double>(m.weeks.size(), 0.0));
    m.burst.assign(m.terms.size(), std::vector<bool>(m.weeks.size(), false));
    for (std::size_t t = 0; t < m.terms.size(); ++t) {
        std::uint64_t total = 0;
        for (std::size_t w = 0; w < m.weeks.size(); ++w) {
            if (auto it = counts[w].find(m.terms[t]); it != counts[w].end()) {
                m.observed[t][w] = it->second;
                total += it->second;
            }
        }
        m.expected[t] =
            static_cast<double>(total) / static_cast<double>(m.weeks.size());
    }
    return m;
}

namespace {

double chi2_one_cell(double o, double e) {
    double d = o - e;
    return d * d / e;
}

double chi2_contingency(std::uint64_t o, std::uint64_t term_total,
                        std::uint64_t week_total, std::uint64_t grand_total) {
    // 2x2 table: this-term/other-terms x this-week/other-weeks
    double a = static_cast<double>(o);
    double b = static_cast<double>(term_total - o);
    double c = static_cast<double>(week_total - o);
    double d = static_cast<double>(grand_total - term_total - week_total + o);
    double n = static_cast<double>(grand_total);
    double denom = (a + b) * (c + d) * (a + c) * (b + d);
    if (denom == 0.0) return 0.0;
    double det = a * d - b * c;
    return n * det * det / denom;
}

}  // namespace

TermWeekMatrix chi2_bursts(TermWeekMatrix m, Chi2Mode mode) {
    TermWeekMatrix out;
    out.weeks = m.weeks;
    out.week_totals = m.week_totals;
    out.excluded = m.excluded;

    std::uint64_t grand_total = 0;
    for (std::uint64_t wt : m.week_totals) grand_total += wt;

    for (std::size_t t = 0; t < m.terms.size(); ++t) {
        if (m.expected[t] == 0.0) {
            out.excluded.push_back(m.terms[t]);
            continue;
        }
        std::uint64_t term_total = 0;
        for (std::uint64_t o : m.observed[t]) term_total += o;

        std::vector<double> chi2_row(m.weeks.size(), 0.0);
        std::vector<bool> burst_row(m.weeks.size(), false);
        for (std::size_t w = 0; w < m.weeks.size(); ++w) {
            std::uint64_t o = m.observed[t][w];
            double chi2 = mode == Chi2Mode::OneCell
                              ? chi2_one_cell(static_cast<double>(o), m.expected[t])
                              : chi2_contingency(o, term_total, m.week_totals[w],
                                                 grand_total);
            chi2_row[w] = chi2;
            burst_row[w] = o > 4 && static_cast<double>(o) > m.expected[t] &&
                           chi2 >= kChi2Critical99;
        }
        out.terms.push_back(std::move(m.terms[t]));
        out.observed.push_back(std::move(m.observed[t]));
        out.expected.push_back(m.expected[t]);
        out.chi2.push_back(std::move(chi2_row));
        out.burst.push_back(std::move(burst_row));
    }
    return out;
}

void write_bursts_csv(const TermWeekMatrix& m, std::ostream& out) {
    CsvWriter w(out);
    w.row({"term", "year", "week", "observed", "expected", "chi2", "burst"});
    for (std::size_t t = 0; t < m.terms.size(); ++t) {
        for (std::size_t wk = 0; wk < m.weeks.size(); ++wk) {
            w.field(m.terms[t])
                .field(m.weeks[wk].year)
                .field(m.weeks[wk].week)
                .field(m.observed[t][wk])
                .field(m.expected[t])
                .field(m.chi2[t][wk])
                .field(static_cast<bool>(m.burst[t][wk]));
            w.end_row();
        }
    }
}

TermWeekMatrix read_bursts_csv(std::istream& in) {
    auto rows = read_csv_expect(
        in, {"term", "year", "week", "observed", "expected", "chi2", "burst"},
        "bursts csv");
    TermWeekMatrix m;
    std::map<std::string, std::size_t> term_index;
    std::map<WeekKey, std::size_t> week_index;
    for (const auto& r : rows) {
        WeekKey wk{parse_int(r[1], "year"), parse_int(r[2], "week")};
        if (!week_index.count(wk)) {
            week_index[wk] = m.weeks.size();
            m.weeks.push_back(wk);
        }
        if (!term_index.count(r[0])) {
            term_index[r[0]] = m.terms.size();
            m.terms.push_back(r[0]);
        }
    }
    std::size_t nt = m.terms.size();
    std::size_t nw = m.weeks.size();
    m.observed.assign(nt, std::vector<std::uint64_t>(nw, 0));
    m.expected.assign(nt, 0.0);
    m.week_totals.assign(nw, 0);
    m.chi2.assign(nt, std::vector<double>(nw, 0.0));
    m.burst.assign(nt, std::vector<bool>(nw, false));
    for (const auto& r : rows) {
        std::size_t t = term_index[r[0]];
        std::size_t w = week_index[WeekKey{parse_int(r[1], "year"),
                                           parse_int(r[2], "week")}];
        m.observed[t][w] = parse_u64(r[3], "observed");
        m.expected[t] = parse_double(r[4], "expected");
        m.chi2[t][w] = parse_double(r[5], "chi2");
        m.burst[t][w] = r[6] == "true" || r[6] == "1";
    }
    return m;
}

}  // namespace spamdrift
