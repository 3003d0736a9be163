#pragma once

#include <string>
#include <vector>

#include "axifb/field.hpp"

namespace axifb::cli {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

// Line plot; x is drawn on a log axis when log_x is set.
void write_line_plot(const std::string& path, const std::string& title, const std::vector<Series>& series, bool log_x);

// Filled cells of a grid field, shaded by value, with iso-lines at the given levels.
void write_level_sets(const std::string& path, const std::string& title, const GridField& f, int n_levels = 8);

}  // namespace axifb::cli
