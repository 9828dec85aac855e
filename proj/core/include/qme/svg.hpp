// svg.hpp — minimal static SVG line plots for ensemble reports

#pragma once

#include <string>
#include <vector>

namespace qme::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> band; // optional ± band around y (same length), may be empty
    std::vector<double> yerr; // optional error bars, may be empty
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<Series> series;
};

void write_svg(const Plot& plot, const std::string& path, int width = 640, int height = 420);

} // namespace qme::svg
