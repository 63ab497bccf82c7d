#include "aggseek/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace aggseek {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 450.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
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

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo <= 0.0) {
            const double pad = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1;
            lo -= pad;
            hi += pad;
        }
    }
};

}  // namespace

void write_svg(std::ostream& out, const LinePlot& plot, std::size_t max_points) {
    Range xr, yr;
    for (const auto& s : plot.series) {
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.finish();
    yr.finish();
    yr.lo = std::min(yr.lo, 0.0);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(plot.title) << "</text>\n";

    // Axes and ticks.
    out << "  <g stroke=\"black\" stroke-width=\"1\">\n";
    out << "    <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(kLeft + plot_w)
        << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
    out << "    <line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
        << num(kTop + plot_h) << "\"/>\n";
    out << "  </g>\n";
    constexpr int kTicks = 5;
    out << "  <g fill=\"black\">\n";
    for (int t = 0; t <= kTicks; ++t) {
        const double xv = xr.lo + (xr.hi - xr.lo) * t / kTicks;
        const double yv = yr.lo + (yr.hi - yr.lo) * t / kTicks;
        out << "    <text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        out << "    <text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
            << tick_label(yv) << "</text>\n";
    }
    out << "    <text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
        << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
    out << "    <text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << num(kTop + plot_h / 2) << ")\">" << escape(plot.y_label) << "</text>\n";
    out << "  </g>\n";

    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const auto& series = plot.series[s];
        const std::size_t count = std::min(series.x.size(), series.y.size());
        const std::size_t stride = std::max<std::size_t>(1, (count + max_points - 1) / std::max<std::size_t>(max_points, 1));
        out << "  <polyline fill=\"none\" stroke=\"" << kColors[s % kColors.size()] << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t j = 0; j < count; j += stride) {
            if (!std::isfinite(series.y[j])) continue;
            out << (first ? "" : " ") << num(px(series.x[j])) << ',' << num(py(series.y[j]));
            first = false;
        }
        if (count > 0 && (count - 1) % stride != 0 && std::isfinite(series.y[count - 1])) {
            out << (first ? "" : " ") << num(px(series.x[count - 1])) << ',' << num(py(series.y[count - 1]));
        }
        out << "\"/>\n";
    }

    // Legend, top right.
    const double lx = kLeft + plot_w - 170.0;
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
        out << "  <line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24) << "\" y2=\""
            << num(ly - 4) << "\" stroke=\"" << kColors[s % kColors.size()] << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << num(lx + 30) << "\" y=\"" << num(ly) << "\">" << escape(plot.series[s].label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace aggseek
