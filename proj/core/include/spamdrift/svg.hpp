// svg.hpp
//
// Minimal self-contained SVG charts for the three artifacts: the
// weekly prior line chart, the term-burst grid and the cost-curve
// plot.  Output is deterministic text with no external assets, so
// identical inputs give byte-identical files.

#ifndef SPAMDRIFT_SVG_HPP
#define SPAMDRIFT_SVG_HPP

#include <string>
#include <vector>

#include "spamdrift/costs.hpp"
#include "spamdrift/drift.hpp"

namespace spamdrift {

/// line chart of p(spam) per week; undefined weeks break the line
std::string render_prior_chart(const WeekSeries& s);

/// term x week grid, bar height proportional to the term's weekly
/// frequency, burst cells marked
std::string render_burst_grid(const TermWeekMatrix& m);

/// one cost line per classifier over pcf in [0,1], with the operating
/// range shaded
std::string render_cost_curve(const std::vector<ClassifierPoint>& points,
                              const PcfRange& range);

}  // namespace spamdrift

#endif  // SPAMDRIFT_SVG_HPP
