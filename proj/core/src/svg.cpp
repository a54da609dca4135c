#include "spamdrift/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace spamdrift {

namespace {

constexpr const char* kPalette[] = {"#1f6fb2", "#c23b22", "#2e8b57",
                                    "#8a2be2", "#d4881e", "#3a3a3a"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void open_svg(std::string& out, int w, int h) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    out += std::to_string(w);
    out += "\" height=\"";
    out += std::to_string(h);
    out += "\" viewBox=\"0 0 " + std::to_string(w) + ' ' + std::to_string(h) +
           "\" font-family=\"monospace\" font-size=\"11\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

void text_at(std::string& out, double x, double y, const std::string& s,
             const char* anchor = "start") {
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
           anchor + "\">" + s + "</text>\n";
}

void line(std::string& out, double x1, double y1, double x2, double y2,
          const char* stroke = "#888888") {
    out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
           num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\"/>\n";
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_prior_chart(const WeekSeries& s) {
    constexpr int kW = 720, kH = 260;
    constexpr double kL = 56, kR = 16, kT = 20, kB = 40;
    const double plot_w = kW - kL - kR;
    const double plot_h = kH - kT - kB;

    std::string out;
    open_svg(out, kW, kH);

    // frame and y gridlines at 0, .25, .5, .75, 1
    for (int i = 0; i <= 4; ++i) {
        double p = i * 0.25;
        double y = kT + (1.0 - p) * plot_h;
        line(out, kL, y, kW - kR, y, i == 0 ? "#444444" : "#dddddd");
        text_at(out, kL - 6, y + 4, num(p), "end");
    }
    line(out, kL, kT, kL, kH - kB, "#444444");
    text_at(out, kL, kH - 8, "p(spam) per week");

    std::size_t n = s.size();
    if (n > 0) {
        auto x_of = [&](std::size_t i) {
            return n == 1 ? kL + plot_w / 2
                          : kL + plot_w * static_cast<double>(i) /
                                     static_cast<double>(n - 1);
        };
        // week labels at the ends
        text_at(out, x_of(0), kH - kB + 16, s.front().week.label(), "middle");
        if (n > 1) {
            text_at(out, x_of(n - 1), kH - kB + 16, s.back().week.label(),
                    "middle");
        }
        // polyline segments; an undefined week breaks the line
        std::string points;
        auto flush = [&]() {
            if (points.empty()) return;
            out += "<polyline fill=\"none\" stroke=\"#1f6fb2\" "
                   "stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < n; ++i) {
            if (!s[i].p_spam) {
                flush();
                continue;
            }
            double y = kT + (1.0 - *s[i].p_spam) * plot_h;
            points += num(x_of(i)) + ',' + num(y) + ' ';
            out += "<circle cx=\"" + num(x_of(i)) + "\" cy=\"" + num(y) +
                   "\" r=\"2\" fill=\"#1f6fb2\"/>\n";
        }
        flush();
    }
    out += "</svg>\n";
    return out;
}

std::string render_burst_grid(const TermWeekMatrix& m) {
    constexpr double kCellW = 12, kCellH = 26, kGap = 2;
    constexpr double kLeft = 110, kTop = 28, kBottom = 34;
    const std::size_t nt = m.terms.size();
    const std::size_t nw = m.weeks.size();
    const int width = static_cast<int>(kLeft + nw * (kCellW + kGap) + 20);
    const int height =
        static_cast<int>(kTop + nt * (kCellH + kGap) + kBottom);

    std::string out;
    open_svg(out, width, height);
    text_at(out, kLeft, 16, "term frequency per week, bursts outlined");

    for (std::size_t t = 0; t < nt; ++t) {
        double row_y = kTop + t * (kCellH + kGap);
        text_at(out, kLeft - 8, row_y + kCellH - 8, escape(m.terms[t]), "end");
        std::uint64_t row_max = 0;
        for (std::uint64_t o : m.observed[t]) row_max = std::max(row_max, o);
        for (std::size_t w = 0; w < nw; ++w) {
            double x = kLeft + w * (kCellW + kGap);
            out += "<rect x=\"" + num(x) + "\" y=\"" + num(row_y) +
                   "\" width=\"" + num(kCellW) + "\" height=\"" + num(kCellH) +
                   "\" fill=\"#f4f4f4\"/>\n";
            if (row_max > 0 && m.observed[t][w] > 0) {
                double frac = static_cast<double>(m.observed[t][w]) /
                              static_cast<double>(row_max);
                double bar_h = frac * (kCellH - 2);
                bool burst = m.burst[t][w];
                out += "<rect x=\"" + num(x + 1) + "\" y=\"" +
                       num(row_y + kCellH - 1 - bar_h) + "\" width=\"" +
                       num(kCellW - 2) + "\" height=\"" + num(bar_h) +
                       "\" fill=\"" + (burst ? "#c23b22" : "#7a9cc0") +
                       "\"/>\n";
                if (burst) {
                    out += "<rect x=\"" + num(x) + "\" y=\"" + num(row_y) +
                           "\" width=\"" + num(kCellW) + "\" height=\"" +
                           num(kCellH) +
                           "\" fill=\"none\" stroke=\"#c23b22\" "
                           "stroke-width=\"1.5\"/>\n";
                }
            }
        }
    }
    if (nw > 0) {
        double base_y = kTop + nt * (kCellH + kGap) + 14;
        text_at(out, kLeft, base_y, m.weeks.front().label());
        if (nw > 1) {
            text_at(out, kLeft + (nw - 1) * (kCellW + kGap) + kCellW, base_y,
                    m.weeks.back().label(), "end");
        }
    }
    out += "</svg>\n";
    return out;
}

std::string render_cost_curve(const std::vector<ClassifierPoint>& points,
                              const PcfRange& range) {
    constexpr int kW = 720, kH = 300;
    constexpr double kL = 56, kR = 150, kT = 20, kB = 40;
    const double plot_w = kW - kL - kR;
    const double plot_h = kH - kT - kB;

    // y scale covers the tallest cost endpoint, at least 0.1
    double y_max = 0.1;
    for (const ClassifierPoint& pt : points) {
        y_max = std::max({y_max, expected_cost(pt, 0.0), expected_cost(pt, 1.0)});
    }

    auto x_of = [&](double pcf_v) { return kL + pcf_v * plot_w; };
    auto y_of = [&](double cost) { return kT + (1.0 - cost / y_max) * plot_h; };

    std::string out;
    open_svg(out, kW, kH);

    // shaded operating range
    out += "<rect x=\"" + num(x_of(range.lo)) + "\" y=\"" + num(kT) +
           "\" width=\"" + num(x_of(range.hi) - x_of(range.lo)) +
           "\" height=\"" + num(plot_h) + "\" fill=\"#fdf0d2\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        double f = i * 0.25;
        line(out, kL, y_of(f * y_max), kW - kR, y_of(f * y_max),
             i == 0 ? "#444444" : "#dddddd");
        text_at(out, kL - 6, y_of(f * y_max) + 4, num(f * y_max), "end");
        double x = x_of(f);
        text_at(out, x, kH - kB + 16, num(f), "middle");
    }
    line(out, kL, kT, kL, kH - kB, "#444444");
    text_at(out, kL, kH - 8,
            "normalized expected cost over pcf; shaded band = operating range");

    for (std::size_t i = 0; i < points.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        out += "<line x1=\"" + num(x_of(0.0)) + "\" y1=\"" +
               num(y_of(expected_cost(points[i], 0.0))) + "\" x2=\"" +
               num(x_of(1.0)) + "\" y2=\"" +
               num(y_of(expected_cost(points[i], 1.0))) + "\" stroke=\"" +
               color + "\" stroke-width=\"1.5\"/>\n";
        double ly = kT + 14 + 16 * static_cast<double>(i);
        out += "<rect x=\"" + num(kW - kR + 10) + "\" y=\"" + num(ly - 9) +
               "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        text_at(out, kW - kR + 26, ly, escape(points[i].name));
    }
    out += "</svg>\n";
    return out;
}

}  // namespace spamdrift
