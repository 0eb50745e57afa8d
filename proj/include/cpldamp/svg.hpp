#pragma once
// Self-contained SVG 1.1 line plots: stacked panels over a shared log10
// time axis, which is the natural scale for a network whose interesting
// motion spans microseconds to seconds. No external renderer involved.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace cpldamp {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct PlotPanel {
    std::string y_label;
    std::vector<PlotSeries> series;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Tick spacing covering the range in a handful of 1/2/5 steps.
inline double nice_step(double range) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / 4.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    if (norm < 1.5) return mag;
    if (norm < 3.5) return 2.0 * mag;
    if (norm < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

} // namespace detail

// Renders the panels into one <svg>. Non-positive x values are drawn at the
// left edge (the axis is logarithmic); non-finite y values break the line.
inline std::string render_log_time_svg(const std::vector<PlotPanel>& panels,
                                       const std::string& title) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b"};
    const double W = 960, left = 80, right = 24;
    const double panel_h = 190, gap = 44, top = 48;
    const double plot_w = W - left - right;
    const double H = top + static_cast<double>(panels.size()) * (panel_h + gap) + 8;

    // Shared x range from the positive samples of every series.
    double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
    for (const auto& p : panels)
        for (const auto& s : p.series)
            for (double x : s.x)
                if (x > 0.0 && std::isfinite(x)) {
                    xmin = std::min(xmin, x);
                    xmax = std::max(xmax, x);
                }
    if (!(xmin < xmax)) {
        xmin = 1e-6;
        xmax = 1.0;
    }
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const auto map_x = [&](double x) {
        const double lx = std::log10(std::max(x, xmin));
        return left + (lx - lx0) / (lx1 - lx0) * plot_w;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           detail::svg_num(W) + "\" height=\"" + detail::svg_num(H) +
           "\" viewBox=\"0 0 " + detail::svg_num(W) + " " + detail::svg_num(H) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + detail::svg_num(W / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\" fill=\"#222\">" +
           detail::xml_escape(title) + "</text>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const PlotPanel& panel = panels[pi];
        const double y_top = top + static_cast<double>(pi) * (panel_h + gap);
        const double y_bot = y_top + panel_h;

        double ymin = std::numeric_limits<double>::infinity();
        double ymax = -std::numeric_limits<double>::infinity();
        for (const auto& s : panel.series)
            for (double y : s.y)
                if (std::isfinite(y)) {
                    ymin = std::min(ymin, y);
                    ymax = std::max(ymax, y);
                }
        if (!(ymin <= ymax)) {
            ymin = 0.0;
            ymax = 1.0;
        }
        if (ymin == ymax) {
            const double pad = std::max(1e-12, std::abs(ymin) * 0.1 + 1e-12);
            ymin -= pad;
            ymax += pad;
        } else {
            const double pad = 0.05 * (ymax - ymin);
            ymin -= pad;
            ymax += pad;
        }
        const auto map_y = [&](double y) {
            return y_bot - (y - ymin) / (ymax - ymin) * panel_h;
        };

        // frame + panel label
        svg += "<rect x=\"" + detail::svg_num(left) + "\" y=\"" +
               detail::svg_num(y_top) + "\" width=\"" + detail::svg_num(plot_w) +
               "\" height=\"" + detail::svg_num(panel_h) +
               "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + detail::svg_num(left) + "\" y=\"" +
               detail::svg_num(y_top - 8) +
               "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\">" +
               detail::xml_escape(panel.y_label) + "</text>\n";

        // decade grid and x tick labels (labels on the bottom panel only)
        for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
            const double px = map_x(std::pow(10.0, d));
            svg += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" +
                   detail::svg_num(y_top) + "\" x2=\"" + detail::svg_num(px) +
                   "\" y2=\"" + detail::svg_num(y_bot) +
                   "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
            if (pi + 1 == panels.size()) {
                svg += "<text x=\"" + detail::svg_num(px) + "\" y=\"" +
                       detail::svg_num(y_bot + 18) +
                       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                       "font-size=\"11\" fill=\"#555\">1e" +
                       std::to_string(d) + "</text>\n";
            }
        }
        if (pi + 1 == panels.size()) {
            svg += "<text x=\"" + detail::svg_num(left + plot_w / 2) + "\" y=\"" +
                   detail::svg_num(y_bot + 36) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                   "font-size=\"12\" fill=\"#222\">time [s]</text>\n";
        }

        // y grid + labels
        const double step = detail::nice_step(ymax - ymin);
        for (double yt = std::ceil(ymin / step) * step; yt <= ymax + 1e-12 * step;
             yt += step) {
            const double py = map_y(yt);
            svg += "<line x1=\"" + detail::svg_num(left) + "\" y1=\"" +
                   detail::svg_num(py) + "\" x2=\"" + detail::svg_num(left + plot_w) +
                   "\" y2=\"" + detail::svg_num(py) +
                   "\" stroke=\"#eee\" stroke-width=\"1\"/>\n";
            svg += "<text x=\"" + detail::svg_num(left - 6) + "\" y=\"" +
                   detail::svg_num(py + 4) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                   "font-size=\"11\" fill=\"#555\">" +
                   detail::svg_num(yt) + "</text>\n";
        }

        // data
        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const PlotSeries& s = panel.series[si];
            const char* color = palette[si % (sizeof palette / sizeof *palette)];
            std::string pts;
            auto flush = [&]() {
                if (!pts.empty()) {
                    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
                    pts.clear();
                }
            };
            const std::size_t n = std::min(s.x.size(), s.y.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.y[i])) {
                    flush();
                    continue;
                }
                if (!pts.empty()) pts += ' ';
                pts += detail::svg_num(map_x(s.x[i])) + "," +
                       detail::svg_num(map_y(s.y[i]));
            }
            flush();
            // legend entry
            const double lg_x = left + 10 + static_cast<double>(si) * 150;
            svg += "<line x1=\"" + detail::svg_num(lg_x) + "\" y1=\"" +
                   detail::svg_num(y_top + 12) + "\" x2=\"" +
                   detail::svg_num(lg_x + 18) + "\" y2=\"" +
                   detail::svg_num(y_top + 12) + "\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
            svg += "<text x=\"" + detail::svg_num(lg_x + 24) + "\" y=\"" +
                   detail::svg_num(y_top + 16) +
                   "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" +
                   detail::xml_escape(s.label) + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace cpldamp
