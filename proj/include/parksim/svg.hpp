#pragma once

#include <string>
#include <utility>
#include <vector>

namespace parksim {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool draw_line = true;  // false: markers only
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 720;
    int height = 480;
};

// Self-contained SVG line/scatter plot. Each series becomes a <g
// data-label="..."> holding an optional polyline plus one circle per point,
// so files stay machine-checkable.
void write_plot_svg(const std::string& path, const PlotSpec& spec);

// The standard figure set derived from a results CSV. Figures whose axis has
// fewer than two distinct values are skipped. Returns the paths written.
std::vector<std::string> write_standard_plots(const std::string& results_csv,
                                              const std::string& out_dir);

}  // namespace parksim
