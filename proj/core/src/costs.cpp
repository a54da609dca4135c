#include "spamdrift/costs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "spamdrift/csv.hpp"

namespace spamdrift {

void CostSpec::validate() const {
    if (!(std::isfinite(cost_fp) && cost_fp > 0.0) ||
        !(std::isfinite(cost_fn) && cost_fn > 0.0)) {
        throw std::invalid_argument("costs must be finite and strictly positive");
    }
}

double pcf(double p_spam, const CostSpec& c) {
    c.validate();
    if (!(p_spam >= 0.0 && p_spam <= 1.0)) {
        throw std::invalid_argument("p_spam must lie in [0, 1]");
    }
    if (p_spam == 0.0) return 0.0;
    if (p_spam == 1.0) return 1.0;
    double num = p_spam * c.cost_fn;
    return num / (num + (1.0 - p_spam) * c.cost_fp);
}

PcfRange pcf_range(double p_lo, double p_hi, const CostSpec& c) {
    if (p_lo > p_hi) std::swap(p_lo, p_hi);
    // pcf is increasing in p, so the prior extremes map to the pcf extremes
    return PcfRange{pcf(p_lo, c), pcf(p_hi, c)};
}

PcfRange pcf_range(const WeekSeries& priors, const CostSpec& c) {
    auto [lo, hi] = series_range(priors);  // throws when all-undefined
    return pcf_range(lo, hi, c);
}

double expected_cost(const ClassifierPoint& pt, double pcf_value) {
    return pt.fnr * pcf_value + pt.fpr * (1.0 - pcf_value);
}

namespace {

double slope(const ClassifierPoint& pt) { return pt.fnr - pt.fpr; }

/// index of the line that is lowest immediately to the right of x:
/// minimal cost, then minimal slope, then name
std::size_t winner_at(const std::vector<ClassifierPoint>& pts, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double ci = expected_cost(pts[i], x);
        double cb = expected_cost(pts[best], x);
        if (ci < cb) {
            best = i;
        } else if (ci == cb) {
            double si = slope(pts[i]);
            double sb = slope(pts[best]);
            if (si < sb || (si == sb && pts[i].name < pts[best].name)) {
                best = i;
            }
        }
    }
    return best;
}

}  // namespace

std::vector<DominanceInterval> dominant_over_range(
    const std::vector<ClassifierPoint>& points, const PcfRange& r, int grid) {
    if (points.empty()) {
        throw std::invalid_argument("dominance needs at least one classifier");
    }
    if (grid < 2) {
        throw std::invalid_argument("grid must be at least 2");
    }
    if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi)) {
        throw std::invalid_argument("pcf range must satisfy 0 <= lo <= hi <= 1");
    }

    std::vector<DominanceInterval> out;
    double x = r.lo;
    std::size_t w = winner_at(points, x);
    while (true) {
        // earliest point in (x, hi) where a shallower line undercuts
        // the current winner; linear costs make this exact.  The
        // undercutting line becomes the next winner directly — deciding
        // by re-evaluated costs at the rounded crossover could re-pick
        // the old line and stall the walk.
        double next_x = r.hi;
        std::size_t next_w = w;
        bool found = false;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == w) continue;
            double dm = slope(points[j]) - slope(points[w]);
            if (dm >= 0.0) continue;  // never dips below the winner later
            double cross = (points[w].fpr - points[j].fpr) / dm;
            if (cross <= x || cross >= r.hi) continue;
            if (!found || cross < next_x) {
                next_x = cross;
                next_w = j;
                found = true;
            } else if (cross == next_x) {
                // concurrent crossers: lowest just right of the point
                double sj = slope(points[j]);
                double sn = slope(points[next_w]);
                if (sj < sn ||
                    (sj == sn && points[j].name < points[next_w].name)) {
                    next_w = j;
                }
            }
        }
        if (!found) {
            out.push_back({x, r.hi, points[w].name});
            break;
        }
        out.push_back({x, next_x, points[w].name});
        x = next_x;
        w = next_w;
    }
    return out;
}

std::vector<AccuracyCostRow> accuracy_is_misleading_report(
    const ClassifierPoint& pt, const WeekSeries& priors, const CostSpec& c) {
    c.validate();
    std::vector<AccuracyCostRow> rows;
    for (const PriorEntry& e : priors) {
        if (!e.p_spam) continue;
        double p = *e.p_spam;
        AccuracyCostRow r;
        r.week = e.week;
        r.p_spam = p;
        r.accuracy = p * (1.0 - pt.fnr) + (1.0 - p) * (1.0 - pt.fpr);
        r.error_rate = 1.0 - r.accuracy;
        r.expected_cost = expected_cost(pt, pcf(p, c));
        rows.push_back(r);
    }
    return rows;
}

void write_pcf_csv(const WeekSeries& priors, const CostSpec& c,
                   std::ostream& out) {
    c.validate();
    CsvWriter w(out);
    w.row({"year", "week", "p_spam", "pcf"});
    for (const PriorEntry& e : priors) {
        if (!e.p_spam) continue;
        w.field(e.week.year)
            .field(e.week.week)
            .field(*e.p_spam)
            .field(pcf(*e.p_spam, c));
        w.end_row();
    }
}

void write_dominance_csv(const std::vector<DominanceInterval>& intervals,
                         std::ostream& out) {
    CsvWriter w(out);
    w.row({"interval_lo", "interval_hi", "winner"});
    for (const DominanceInterval& iv : intervals) {
        w.field(iv.lo).field(iv.hi).field(iv.winner);
        w.end_row();
    }
}

}  // namespace spamdrift
