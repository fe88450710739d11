#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace hierlab::io {

// Minimal SVG line plot (log10 y-axis when all values are positive).
struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

inline std::string svg_plot(const std::vector<SvgSeries>& series, const std::string& title,
                            bool logy = true) {
    const double W = 720, H = 420, L = 70, R = 20, T = 40, B = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double yv = s.y[i];
            if (logy) {
                if (yv <= 0) yv = 1e-18;
                yv = std::log10(yv);
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) {
        if (logy) y = std::log10(std::max(y, 1e-18));
        return H - B - (y - ymin) / (ymax - ymin) * (H - T - B);
    };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::string out;
    out += "<svg xmlns='http://www.w3.org/2000/svg' width='" + std::to_string((int)W) +
           "' height='" + std::to_string((int)H) + "'>\n";
    out += "<rect width='100%' height='100%' fill='white'/>\n";
    out += "<text x='" + std::to_string((int)(W / 2)) + "' y='24' text-anchor='middle' "
           "font-family='sans-serif' font-size='15'>" + title + "</text>\n";
    out += "<line x1='" + std::to_string((int)L) + "' y1='" + std::to_string((int)(H - B)) +
           "' x2='" + std::to_string((int)(W - R)) + "' y2='" + std::to_string((int)(H - B)) +
           "' stroke='black'/>\n";
    out += "<line x1='" + std::to_string((int)L) + "' y1='" + std::to_string((int)T) + "' x2='" +
           std::to_string((int)L) + "' y2='" + std::to_string((int)(H - B)) +
           "' stroke='black'/>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += std::to_string(px(s.x[i])) + "," + std::to_string(py(s.y[i])) + " ";
        out += "<polyline fill='none' stroke='" + std::string(colors[si % 6]) +
               "' stroke-width='1.5' points='" + pts + "'/>\n";
        out += "<text x='" + std::to_string((int)(L + 10)) + "' y='" +
               std::to_string((int)(T + 16 * (si + 1))) + "' font-family='sans-serif' "
               "font-size='12' fill='" + std::string(colors[si % 6]) + "'>" + s.label +
               "</text>\n";
    }
    if (logy)
        out += "<text x='12' y='" + std::to_string((int)(H / 2)) +
               "' font-family='sans-serif' font-size='11'>log10</text>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace hierlab::io
