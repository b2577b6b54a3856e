#pragma once

// Minimal self-contained SVG line plots: polylines, ticks, legend. Keeps the
// figure outputs diff-able without a plotting dependency.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace svgplot {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                 "#bcbd22"};

}  // namespace detail

inline void write_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series, bool logx, bool logy) {
    const double width = 760, height = 500;
    const double ml = 70, mr = 160, mt = 40, mb = 55;

    auto tx = [&](double v) { return logx ? std::log10(v) : v; };
    auto ty = [&](double v) { return logy ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (logx && s.x[i] <= 0.0) continue;
            if (logy && s.y[i] <= 0.0) continue;
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;

    auto px = [&](double v) {
        return ml + (tx(v) - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto py = [&](double v) {
        return height - mb - (ty(v) - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"22\" "
        << "text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
        << width - mr << "\" y2=\"" << height - mb
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";

    auto ticks = [&](double lo, double hi, bool log) {
        std::vector<double> t;
        if (log) {
            for (double d = std::ceil(lo); d <= std::floor(hi) + 1e-9; d += 1.0)
                t.push_back(d);
            if (t.size() > 12) {
                std::vector<double> thin;
                const std::size_t step = (t.size() + 11) / 12;
                for (std::size_t i = 0; i < t.size(); i += step) thin.push_back(t[i]);
                t = thin;
            }
        } else {
            const double span = hi - lo;
            const double raw = span / 5.0;
            const double mag = std::pow(10.0, std::floor(std::log10(raw)));
            double step = mag;
            if (raw / mag > 5.0)
                step = 10.0 * mag;
            else if (raw / mag > 2.0)
                step = 5.0 * mag;
            else if (raw / mag > 1.0)
                step = 2.0 * mag;
            for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span;
                 v += step)
                t.push_back(v);
        }
        return t;
    };

    for (double v : ticks(xmin, xmax, logx)) {
        const double X = ml + (v - xmin) / (xmax - xmin) * (width - ml - mr);
        out << "<line x1=\"" << X << "\" y1=\"" << height - mb << "\" x2=\"" << X
            << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << X << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\" font-size=\"11\">"
            << detail::fmt(logx ? std::pow(10.0, v) : v) << "</text>\n";
    }
    for (double v : ticks(ymin, ymax, logy)) {
        const double Y =
            height - mb - (v - ymin) / (ymax - ymin) * (height - mt - mb);
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml
            << "\" y2=\"" << Y << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4
            << "\" text-anchor=\"end\" font-size=\"11\">"
            << detail::fmt(logy ? std::pow(10.0, v) : v) << "</text>\n";
    }

    out << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\""
        << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + (height - mt - mb) / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << (mt + (height - mt - mb) / 2) << ")\">" << ylabel << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = detail::kPalette[ci % 9];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (logx && s.x[i] <= 0.0) continue;
            if (logy && s.y[i] <= 0.0) continue;
            out << detail::fmt(px(s.x[i])) << "," << detail::fmt(py(s.y[i])) << " ";
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 18 * ci;
        out << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
            << width - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\">" << s.name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace svgplot
