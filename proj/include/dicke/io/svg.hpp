// svg.hpp: small deterministic SVG 1.1 plots: line charts and Wigner heatmaps

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dicke/io/format.hpp"
#include "dicke/params.hpp"
#include "dicke/wigner.hpp"

namespace dicke::io {

inline std::string xml_escape(const std::string& s) {
    std::string out;
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

inline std::string px(double v) { return fixed(v, 2); }

class SvgDocument {
public:
    SvgDocument(int width, int height) : width_(width), height_(height) {}

    void add(std::string element) { body_ += element + "\n"; }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
              const std::string& extra = "") {
        add("<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" + px(y2) +
            "\" stroke=\"" + stroke + "\" stroke-width=\"" + px(width) + "\"" + extra + "/>");
    }

    void text(double x, double y, const std::string& s, const std::string& anchor = "middle", int size = 12,
              const std::string& extra = "") {
        add("<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"sans-serif\" font-size=\"" +
            std::to_string(size) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" + xml_escape(s) + "</text>");
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.5,
                  const std::string& extra = "") {
        if (pts.empty()) return;
        std::string d = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + px(width) + "\"" +
                        extra + " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) d += ' ';
            d += px(pts[i].first) + "," + px(pts[i].second);
        }
        add(d + "\"/>");
    }

    void circle(double cx, double cy, double r, const std::string& stroke, const std::string& fill = "none",
                const std::string& extra = "") {
        add("<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(r) + "\" stroke=\"" + stroke +
            "\" fill=\"" + fill + "\"" + extra + "/>");
    }

    std::string str() const {
        return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
               std::to_string(width_) + "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " +
               std::to_string(width_) + " " + std::to_string(height_) + "\">\n" +
               "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
    }

private:
    int width_, height_;
    std::string body_;
};

// Roughly `target` round tick values covering [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (f * mag >= raw) {
            step = f * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

inline int tick_decimals(const std::vector<double>& ticks) {
    if (ticks.size() < 2) return 2;
    const double step = ticks[1] - ticks[0];
    return std::clamp(static_cast<int>(std::ceil(-std::log10(step) + 1e-9)), 0, 6);
}

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color{"#1f77b4"};
    bool markers{false}; // draw points instead of a line
};

struct VerticalMarker {
    double x;
    std::string label;
};

struct LinePlot {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    std::vector<VerticalMarker> markers;
    int width{720}, height{480};
    bool legend_left{false};
};

inline std::string render_line_plot(const LinePlot& plot) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    std::size_t points = 0;
    for (const auto& s : plot.series) {
        if (s.x.size() != s.y.size()) throw invalid_input("render_line_plot: series '" + s.label + "' x/y mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
            ++points;
        }
    }
    if (points == 0) throw invalid_input("render_line_plot: no data");
    if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double left = 70, right = 20, top = 40, bottom = 55;
    const double w = plot.width - left - right, h = plot.height - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * w; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * h; };

    SvgDocument doc(plot.width, plot.height);
    doc.text(plot.width / 2.0, 22, plot.title, "middle", 15);
    doc.add("<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" + px(w) + "\" height=\"" + px(h) +
            "\" fill=\"none\" stroke=\"black\"/>");
    const auto xt = nice_ticks(x0, x1), yt = nice_ticks(y0, y1);
    const int xd = tick_decimals(xt), yd = tick_decimals(yt);
    for (double t : xt) {
        doc.line(sx(t), top + h, sx(t), top + h + 5, "black");
        doc.text(sx(t), top + h + 18, fixed(t, xd));
    }
    for (double t : yt) {
        doc.line(left - 5, sy(t), left, sy(t), "black");
        doc.text(left - 8, sy(t) + 4, fixed(t, yd), "end");
    }
    doc.text(left + w / 2, plot.height - 12, plot.x_label);
    doc.text(18, top + h / 2, plot.y_label, "middle", 12,
             " transform=\"rotate(-90 18 " + px(top + h / 2) + ")\"");

    for (const auto& m : plot.markers) {
        if (m.x < x0 || m.x > x1) continue;
        doc.line(sx(m.x), top, sx(m.x), top + h, "#888888", 1.0, " stroke-dasharray=\"5,4\"");
        doc.text(sx(m.x) + 4, top + 14, m.label, "start", 11);
    }
    std::size_t longest = 0, labelled = 0;
    for (const auto& s : plot.series)
        if (!s.label.empty()) longest = std::max(longest, s.label.size()), ++labelled;
    const double legend_w = 40 + 6.2 * static_cast<double>(longest);
    const double legend_x = plot.legend_left ? left + 10 : left + w - legend_w - 4;
    double legend_y = top + 16;
    for (const auto& s : plot.series) {
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) doc.circle(sx(s.x[i]), sy(s.y[i]), 2.0, s.color, s.color);
        } else {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) pts.emplace_back(sx(s.x[i]), sy(s.y[i]));
            doc.polyline(pts, s.color);
        }
    }
    if (labelled)
        doc.add("<rect x=\"" + px(legend_x - 6) + "\" y=\"" + px(top + 4) + "\" width=\"" + px(legend_w) +
                "\" height=\"" + px(16.0 * static_cast<double>(labelled) + 4) +
                "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#cccccc\"/>");
    for (const auto& s : plot.series) {
        if (!s.label.empty()) {
            doc.line(legend_x, legend_y - 4, legend_x + 20, legend_y - 4, s.color, 2.0);
            doc.text(legend_x + 26, legend_y, s.label, "start", 11);
            legend_y += 16;
        }
    }
    return doc.str();
}

// Diverging blue-white-red map, t in [-1, 1].
inline std::string diverging_color(double t) {
    t = std::clamp(t, -1.0, 1.0);
    auto mix = [](double a, double b, double u) { return static_cast<int>(std::lround(a + (b - a) * u)); };
    int r, g, b;
    if (t >= 0) {
        r = mix(255, 178, t);
        g = mix(255, 24, t);
        b = mix(255, 43, t);
    } else {
        r = mix(255, 33, -t);
        g = mix(255, 102, -t);
        b = mix(255, 172, -t);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

struct Overlay {
    enum class Shape { circle, point, path } shape{Shape::circle};
    double x{0.0}, y{0.0}, radius{0.0}; // scaled plane units
    std::vector<std::pair<double, double>> path;
    std::string color{"black"};
    std::string label;
    bool dashed{false};
};

struct HeatmapPlot {
    std::string title;
    int max_cells{128};
    double contour_fraction{0.5}; // of max W; <= 0 disables the contour
    std::vector<Overlay> overlays;
    int size{560};
};

// Line segments of the level set of a cell-centered field (marching squares).
inline std::vector<std::array<double, 4>> level_segments(const std::vector<double>& v, int n, double level,
                                                         double origin, double step) {
    std::vector<std::array<double, 4>> segs;
    auto at = [&](int i, int j) { return v[static_cast<std::size_t>(j) * n + i]; };
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            if (std::isnan(c[0]) || std::isnan(c[1]) || std::isnan(c[2]) || std::isnan(c[3])) continue;
            const double cx[4] = {0, 1, 1, 0}, cy[4] = {0, 0, 1, 1};
            std::vector<std::pair<double, double>> hits;
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if ((c[a] >= level) != (c[b] >= level)) {
                    const double u = (level - c[a]) / (c[b] - c[a]);
                    hits.emplace_back(cx[a] + u * (cx[b] - cx[a]), cy[a] + u * (cy[b] - cy[a]));
                }
            }
            auto emit = [&](std::size_t p, std::size_t q) {
                segs.push_back({origin + (i + hits[p].first) * step, origin + (j + hits[p].second) * step,
                                origin + (i + hits[q].first) * step, origin + (j + hits[q].second) * step});
            };
            if (hits.size() == 2) emit(0, 1);
            if (hits.size() == 4) {
                // saddle: pair edges by the centre value
                const double centre = 0.25 * (c[0] + c[1] + c[2] + c[3]);
                if ((centre >= level) == (c[0] >= level)) {
                    emit(0, 3);
                    emit(1, 2);
                } else {
                    emit(0, 1);
                    emit(2, 3);
                }
            }
        }
    return segs;
}

inline std::string render_wigner_heatmap(const WignerGrid& grid, const HeatmapPlot& plot) {
    if (grid.values.empty()) throw invalid_input("render_wigner_heatmap: empty grid");
    const int n = grid.n();
    const int stride = std::max(1, (n + plot.max_cells - 1) / plot.max_cells);
    const int m = n / stride;
    // block averages over stride x stride cells; NaN if any cell is outside the disk
    std::vector<double> coarse(static_cast<std::size_t>(m) * m, std::numeric_limits<double>::quiet_NaN());
    for (int bj = 0; bj < m; ++bj)
        for (int bi = 0; bi < m; ++bi) {
            double sum = 0.0;
            bool ok = true;
            for (int dj = 0; dj < stride && ok; ++dj)
                for (int di = 0; di < stride && ok; ++di) {
                    const double v = grid.at(bi * stride + di, bj * stride + dj);
                    if (std::isnan(v)) ok = false;
                    sum += v;
                }
            if (ok) coarse[static_cast<std::size_t>(bj) * m + bi] = sum / (stride * stride);
        }
    const double step = grid.h() * stride;
    const double origin = -grid.spec.radius + 0.5 * step; // centre of coarse cell 0
    double scale = 0.0;
    for (double v : coarse)
        if (!std::isnan(v)) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) scale = 1.0;

    const double margin = 60, inner = plot.size - 2 * margin;
    const double half = 1.0; // plot the full unit disk
    auto sx = [&](double x) { return margin + (x + half) / (2 * half) * inner; };
    auto sy = [&](double y) { return margin + (half - y) / (2 * half) * inner; };
    const double cell_px = step / (2 * half) * inner;

    const double legend_top = sy(-1) + 56;
    const int height = static_cast<int>(legend_top + 15.0 * (plot.overlays.size() + 1) + 10);
    SvgDocument doc(plot.size, height);
    doc.text(plot.size / 2.0, 24, plot.title, "middle", 15);
    doc.circle(sx(0), sy(0), inner / 2, "#cccccc", "#f4f4f4");
    for (int bj = 0; bj < m; ++bj)
        for (int bi = 0; bi < m; ++bi) {
            const double v = coarse[static_cast<std::size_t>(bj) * m + bi];
            if (std::isnan(v)) continue;
            const double cx = origin + bi * step, cy = origin + bj * step;
            doc.add("<rect x=\"" + px(sx(cx - step / 2)) + "\" y=\"" + px(sy(cy + step / 2)) + "\" width=\"" +
                    px(cell_px + 0.3) + "\" height=\"" + px(cell_px + 0.3) + "\" fill=\"" +
                    diverging_color(v / scale) + "\"/>");
        }

    if (plot.contour_fraction > 0.0) {
        const double level = plot.contour_fraction * grid.max_value();
        const auto segs = level_segments(coarse, m, level, origin, step);
        if (!segs.empty()) {
            std::string d;
            for (const auto& s : segs)
                d += "M" + px(sx(s[0])) + " " + px(sy(s[1])) + "L" + px(sx(s[2])) + " " + px(sy(s[3]));
            doc.add("<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"" + d + "\"/>");
        }
        doc.text(margin, legend_top, "contour: W = " + fixed(plot.contour_fraction * 100, 0) + "% of max (" +
                                                     fixed(level, 4) + ")",
                 "start", 11);
    }

    double legend_y = legend_top + 15;
    for (const auto& o : plot.overlays) {
        const std::string dash = o.dashed ? " stroke-dasharray=\"6,4\"" : "";
        switch (o.shape) {
        case Overlay::Shape::circle:
            doc.circle(sx(o.x), sy(o.y), o.radius / (2 * half) * inner, o.color, "none",
                       " stroke-width=\"1.5\"" + dash);
            break;
        case Overlay::Shape::point:
            doc.circle(sx(o.x), sy(o.y), 4.0, o.color, o.color);
            break;
        case Overlay::Shape::path: {
            std::vector<std::pair<double, double>> pts;
            for (const auto& [x, y] : o.path) pts.emplace_back(sx(x), sy(y));
            doc.polyline(pts, o.color, 0.8, dash);
            break;
        }
        }
        if (!o.label.empty()) {
            doc.line(margin, legend_y - 4, margin + 20, legend_y - 4, o.color, 2.0, dash);
            doc.text(margin + 26, legend_y, o.label, "start", 11);
            legend_y += 15;
        }
    }

    // axes through the disk
    doc.line(sx(-1), sy(0), sx(1), sy(0), "#999999", 0.5);
    doc.line(sx(0), sy(-1), sx(0), sy(1), "#999999", 0.5);
    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        doc.text(sx(t), sy(-1) + 16, fixed(t, 1), "middle", 10);
        doc.text(sx(-1) - 6, sy(t) + 4, fixed(t, 1), "end", 10);
    }
    doc.text(sx(0), sy(-1) + 32, "q1 / sqrt(4J)");
    doc.text(sx(-1) - 36, sy(0), "p1 / sqrt(4J)", "middle", 12,
             " transform=\"rotate(-90 " + px(sx(-1) - 36) + " " + px(sy(0)) + ")\"");
    return doc.str();
}

} // namespace dicke::io
