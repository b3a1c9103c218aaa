#pragma once
// Minimal SVG line charts; CSV stays the canonical output, this is convenience.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>
#include "dbar2/csv.hpp"

namespace dbar2 {

struct SvgSeries {
    std::vector<double> x, y;
    std::string label;
};

// Plots y against x with optional log10 axes; non-finite points are skipped.
inline void write_svg_lines(const std::string& path, const std::vector<SvgSeries>& series,
                            const std::string& title, bool logx = false, bool logy = false) {
    const double W = 720, H = 440, L = 70, R = 20, T = 36, B = 46;
    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double a = tx(s.x[i]), b = ty(s.y[i]);
            if (!std::isfinite(a) || !std::isfinite(b)) continue;
            xmin = std::min(xmin, a); xmax = std::max(xmax, a);
            ymin = std::min(ymin, b); ymax = std::max(ymax, b);
        }
    if (xmin > xmax) { xmin = 0; xmax = 1; }
    if (ymin > ymax) { ymin = 0; ymax = 1; }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    auto px = [&](double v) { return L + (tx(v) - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double v) { return H - B - (ty(v) - ymin) / (ymax - ymin) * (H - T - B); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("svg: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title << "</text>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
        << "' stroke='black'/>\n";
    out << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
        << "' stroke='black'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = xmin + k * (xmax - xmin) / 4, fy = ymin + k * (ymax - ymin) / 4;
        out << "<text x='" << L + k * (W - L - R) / 4 << "' y='" << H - B + 16
            << "' text-anchor='middle' font-size='10'>" << fmt_g12(fx)
            << (logx ? " (lg)" : "") << "</text>\n";
        out << "<text x='" << L - 6 << "' y='" << H - B - k * (H - T - B) / 4 + 4
            << "' text-anchor='end' font-size='10'>" << fmt_g12(fy)
            << (logy ? " (lg)" : "") << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* color = palette[ci % 6];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(tx(s.x[i])) || !std::isfinite(ty(s.y[i]))) continue;
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        out << "'/>\n";
        out << "<text x='" << W - R - 8 << "' y='" << T + 14 + 14 * ci
            << "' text-anchor='end' font-size='11' fill='" << color << "'>" << s.label
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

} // namespace dbar2
