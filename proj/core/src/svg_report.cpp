#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "relregion/bench.hpp"

namespace relregion {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 640.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 440.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (const char c : s) {
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

struct Canvas {
    std::ostringstream body;

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, bool dashed = false) {
        body << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
             << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
             << fmt(width) << "\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " />\n";
    }

    void text(double x, double y, const std::string& s, const std::string& anchor = "middle",
              double size = 12.0, const std::string& fill = "#333333") {
        body << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\"" << anchor
             << "\" font-size=\"" << fmt(size) << "\" font-family=\"sans-serif\" fill=\"" << fill
             << "\">" << escape_xml(s) << "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double width = 2.0) {
        if (pts.size() < 2) return;
        body << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width)
             << "\" points=\"";
        for (const auto& [x, y] : pts) body << fmt(x) << "," << fmt(y) << " ";
        body << "\" />\n";
    }

    void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill,
                 double opacity) {
        if (pts.size() < 3) return;
        body << "<polygon fill=\"" << fill << "\" fill-opacity=\"" << fmt(opacity)
             << "\" stroke=\"none\" points=\"";
        for (const auto& [x, y] : pts) body << fmt(x) << "," << fmt(y) << " ";
        body << "\" />\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        body << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
             << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" />\n";
    }

    std::string finish(const std::string& title) const {
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " "
            << kHeight << "\">\n"
            << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" fill=\"#ffffff\" />\n"
            << "<title>" << escape_xml(title) << "</title>\n"
            << body.str() << "</svg>\n";
        return out.str();
    }
};

}  // namespace

std::string render_cost_vs_time_svg(const BenchReport& report, const std::string& scenario) {
    std::vector<const CellAggregate*> cells;
    for (const auto& agg : report.aggregates) {
        if (agg.scenario == scenario) cells.push_back(&agg);
    }

    const double t_lo = 0.01;
    const double t_hi = std::max(report.time_budget, t_lo * 2.0);
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -std::numeric_limits<double>::infinity();
    for (const auto* cell : cells) {
        for (const auto& pt : cell->curve) {
            if (pt.t < cell->draw_start || pt.t > cell->draw_end) continue;
            y_lo = std::min(y_lo, pt.q25);
            y_hi = std::max(y_hi, pt.q75);
        }
    }
    const auto target_it = report.targets.find(scenario);
    if (target_it != report.targets.end()) {
        y_lo = std::min(y_lo, target_it->second);
        y_hi = std::max(y_hi, target_it->second);
    }
    if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    const double pad = std::max(1e-9, 0.08 * (y_hi - y_lo));
    y_lo -= pad;
    y_hi += pad;

    const auto x_of = [&](double t) {
        const double f = (std::log(std::max(t, t_lo)) - std::log(t_lo)) /
                         (std::log(t_hi) - std::log(t_lo));
        return kLeft + f * (kRight - kLeft);
    };
    const auto y_of = [&](double c) {
        return kBottom - (c - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
    };

    Canvas canvas;
    canvas.line(kLeft, kBottom, kRight, kBottom, "#333333");
    canvas.line(kLeft, kTop, kLeft, kBottom, "#333333");
    canvas.text((kLeft + kRight) / 2, kHeight - 18, "time [s] (log scale)");
    canvas.text(18, (kTop + kBottom) / 2, "cost", "middle", 12.0);
    canvas.text((kLeft + kRight) / 2, 22, "solution cost over time: " + scenario, "middle", 15.0);

    for (double decade = std::pow(10, std::floor(std::log10(t_lo)));
         decade <= t_hi * 1.0001; decade *= 10.0) {
        if (decade < t_lo * 0.9999) continue;
        const double x = x_of(decade);
        canvas.line(x, kBottom, x, kBottom + 6, "#333333");
        canvas.text(x, kBottom + 20, fmt_g(decade));
    }
    for (int i = 0; i <= 5; ++i) {
        const double c = y_lo + (y_hi - y_lo) * i / 5.0;
        const double y = y_of(c);
        canvas.line(kLeft - 6, y, kLeft, y, "#333333");
        canvas.text(kLeft - 10, y + 4, fmt_g(c), "end");
    }

    if (target_it != report.targets.end()) {
        const double y = y_of(target_it->second);
        canvas.line(kLeft, y, kRight, y, "#555555", 1.0, true);
        canvas.text(kRight - 4, y - 6, "target " + fmt_g(target_it->second), "end", 11.0,
                    "#555555");
    }

    std::size_t color = 0;
    for (const auto* cell : cells) {
        const std::string stroke = kPalette[color % 6];
        std::vector<std::pair<double, double>> median;
        std::vector<std::pair<double, double>> upper;
        std::vector<std::pair<double, double>> lower;
        for (const auto& pt : cell->curve) {
            if (pt.t < cell->draw_start || pt.t > cell->draw_end) continue;
            median.emplace_back(x_of(pt.t), y_of(pt.median));
            upper.emplace_back(x_of(pt.t), y_of(pt.q75));
            lower.emplace_back(x_of(pt.t), y_of(pt.q25));
        }
        std::vector<std::pair<double, double>> band = upper;
        band.insert(band.end(), lower.rbegin(), lower.rend());
        canvas.polygon(band, stroke, 0.18);
        canvas.polyline(median, stroke);

        const double ly = kTop + 18.0 * static_cast<double>(color);
        canvas.rect(kRight + 12, ly - 9, 12, 12, stroke);
        canvas.text(kRight + 30, ly + 1, cell->planner, "start", 12.0);
        ++color;
    }

    return canvas.finish("cost vs time: " + scenario);
}

std::string render_time_to_target_svg(const BenchReport& report, const std::string& scenario) {
    std::vector<const CellAggregate*> cells;
    for (const auto& agg : report.aggregates) {
        if (agg.scenario == scenario) cells.push_back(&agg);
    }

    double y_hi = 0.0;
    for (const auto* cell : cells) {
        if (cell->time_to_target.q75) y_hi = std::max(y_hi, *cell->time_to_target.q75);
        if (cell->time_to_target.median) y_hi = std::max(y_hi, *cell->time_to_target.median);
    }
    if (y_hi <= 0.0) y_hi = std::max(report.time_budget, 1.0);
    y_hi *= 1.15;

    const auto y_of = [&](double t) { return kBottom - t / y_hi * (kBottom - kTop); };

    Canvas canvas;
    canvas.line(kLeft, kBottom, kRight, kBottom, "#333333");
    canvas.line(kLeft, kTop, kLeft, kBottom, "#333333");
    canvas.text((kLeft + kRight) / 2, 22, "time to target: " + scenario, "middle", 15.0);
    canvas.text(18, (kTop + kBottom) / 2, "s", "middle", 12.0);
    for (int i = 0; i <= 5; ++i) {
        const double t = y_hi * i / 5.0;
        canvas.line(kLeft - 6, y_of(t), kLeft, y_of(t), "#333333");
        canvas.text(kLeft - 10, y_of(t) + 4, fmt_g(t), "end");
    }

    const double slot = (kRight - kLeft) / std::max<std::size_t>(1, cells.size());
    std::size_t i = 0;
    for (const auto* cell : cells) {
        const std::string fill = kPalette[i % 6];
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double bar_w = slot * 0.4;
        const auto& tt = cell->time_to_target;
        if (tt.median) {
            canvas.rect(cx - bar_w / 2, y_of(*tt.median), bar_w, kBottom - y_of(*tt.median), fill);
            if (tt.q25 && tt.q75) {
                canvas.line(cx, y_of(*tt.q25), cx, y_of(*tt.q75), "#222222", 1.5);
                canvas.line(cx - 6, y_of(*tt.q25), cx + 6, y_of(*tt.q25), "#222222", 1.5);
                canvas.line(cx - 6, y_of(*tt.q75), cx + 6, y_of(*tt.q75), "#222222", 1.5);
            }
        } else {
            canvas.text(cx, (kTop + kBottom) / 2, "all DNF", "middle", 12.0, "#999999");
        }
        canvas.text(cx, kBottom + 20, cell->planner);
        if (tt.dnf > 0) {
            canvas.text(cx, kBottom + 36, "DNF: " + std::to_string(tt.dnf), "middle", 11.0,
                        "#aa3333");
        }
        ++i;
    }

    return canvas.finish("time to target: " + scenario);
}

}  // namespace relregion
