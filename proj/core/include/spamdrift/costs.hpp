// costs.hpp
//
// Probability Cost Function arithmetic and cost-curve dominance
// analysis: which classifier is cheapest where, once the weekly prior
// drift is mapped into cost space.

#ifndef SPAMDRIFT_COSTS_HPP
#define SPAMDRIFT_COSTS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spamdrift/drift.hpp"

namespace spamdrift {

struct CostSpec {
    /// cost of classifying a legitimate message as spam
    double cost_fp = 10.0;
    /// cost of classifying a spam message as legitimate
    double cost_fn = 1.0;

    /// throws std::invalid_argument unless both costs are finite and
    /// strictly positive
    void validate() const;
};

struct PcfRange {
    double lo = 0.0;
    double hi = 0.0;
    double span() const { return hi - lo; }
};

struct ClassifierPoint {
    std::string name;
    double fpr = 0.0;  // false-positive rate
    double fnr = 0.0;  // false-negative rate
};

/// PCF_spam = p·cost_fn / (p·cost_fn + (1−p)·cost_fp);
/// pcf(0) = 0 and pcf(1) = 1 by definition
double pcf(double p_spam, const CostSpec& c);

/// pcf applied to the extremes of the defined priors; monotonicity of
/// pcf in p makes this bracket every weekly value
PcfRange pcf_range(const WeekSeries& priors, const CostSpec& c);
PcfRange pcf_range(double p_lo, double p_hi, const CostSpec& c);

/// normalized expected cost at a cost-curve x position:
/// fnr·pcf + fpr·(1−pcf), in [0,1]
double expected_cost(const ClassifierPoint& pt, double pcf_value);

struct DominanceInterval {
    double lo = 0.0;
    double hi = 0.0;
    std::string winner;
};

/// partitions [r.lo, r.hi] into maximal sub-intervals labeled with the
/// cheapest classifier.  Crossovers are solved exactly from the linear
/// cost functions; ties go to the lexicographically smaller name.  The
/// grid parameter only bounds rendering resolution downstream and must
/// be ≥ 2.
std::vector<DominanceInterval> dominant_over_range(
    const std::vector<ClassifierPoint>& points, const PcfRange& r,
    int grid = 256);

struct AccuracyCostRow {
    WeekKey week;
    double p_spam = 0.0;
    double accuracy = 0.0;
    double error_rate = 0.0;
    double expected_cost = 0.0;
};

/// per defined week: the accuracy, error rate and normalized expected
/// cost of one classifier, side by side — the standing exhibit that
/// accuracy and cost rank filters differently
std::vector<AccuracyCostRow> accuracy_is_misleading_report(
    const ClassifierPoint& pt, const WeekSeries& priors, const CostSpec& c);

/// pcf.csv: year, week, p_spam, pcf (rows for defined weeks only)
void write_pcf_csv(const WeekSeries& priors, const CostSpec& c,
                   std::ostream& out);

/// dominance.csv: interval_lo, interval_hi, winner
void write_dominance_csv(const std::vector<DominanceInterval>& intervals,
                         std::ostream& out);

}  // namespace spamdrift

#endif  // SPAMDRIFT_COSTS_HPP
