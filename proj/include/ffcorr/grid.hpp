#pragma once

#include <string>
#include <vector>

namespace ffcorr {

// Grid syntax "start:stop:step", inclusive of stop within half a step; a
// plain number is a one-point grid.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);

}  // namespace ffcorr
