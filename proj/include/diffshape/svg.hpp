#pragma once

#include <string>
#include <utility>
#include <vector>

namespace diffshape {

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y) in data units
};

// Dependency-free static line chart: axes with tick labels, one polyline per
// series, legend on the right. Returns a complete SVG document.
std::string render_line_chart(const std::vector<SvgSeries>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label);

}  // namespace diffshape
