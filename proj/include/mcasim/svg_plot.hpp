#pragma once

#include <string>
#include <vector>

namespace mcasim {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // same length as x
};

struct PlotLayout {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 840;
    int height = 520;
};

// Static line chart: axes, tick labels, one polyline per series, legend in
// the top-right corner. Output bytes are deterministic for identical inputs.
std::string render_line_plot(const PlotLayout& layout, const std::vector<PlotSeries>& series);

void write_line_plot(const std::string& path, const PlotLayout& layout,
                     const std::vector<PlotSeries>& series);

}  // namespace mcasim
