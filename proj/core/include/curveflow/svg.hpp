#pragma once

#include <string>
#include <vector>

namespace curveflow::svg {

struct Series {
    std::string label;
    std::string color;  // css color
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    int width = 640;
    int height = 480;
    bool log_x = false;
    bool log_y = false;
    bool equal_aspect = false;
    std::string title;
};

/// Minimal line plot; enough for evolution snapshots and series curves.
void write_plot(const std::string& path, const std::vector<Series>& series,
                const PlotOptions& options);

/// Color ramp entry k of n (dark blue to red).
std::string ramp_color(int k, int n);

} // namespace curveflow::svg
