#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace aggseek {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Standalone SVG line chart with linear axes, ticks, axis labels and a legend.
/// Each series becomes one <polyline>; long series are thinned to at most
/// `max_points` vertices.
void write_svg(std::ostream& out, const LinePlot& plot, std::size_t max_points = 2000);

}  // namespace aggseek
