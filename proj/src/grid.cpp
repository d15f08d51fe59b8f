#include "ffcorr/grid.hpp"

#include <cmath>
#include <cstdlib>

#include "ffcorr/errors.hpp"

namespace ffcorr {

namespace {

double parse_number(const std::string& text) {
  char* end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ParseError("grid: not a number: '" + text + "'");
  return value;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  size_t first = text.find(':');
  if (first == std::string::npos) return {parse_number(text)};
  size_t second = text.find(':', first + 1);
  if (second == std::string::npos)
    throw ParseError("grid: expected start:stop:step, got '" + text + "'");

  double start = parse_number(text.substr(0, first));
  double stop = parse_number(text.substr(first + 1, second - first - 1));
  double step = parse_number(text.substr(second + 1));
  if (step <= 0.0) throw ParseError("grid: step must be positive");
  if (stop < start) throw ParseError("grid: stop must be >= start");

  std::vector<double> values;
  // inclusive of stop within half a step
  for (double v = start; v <= stop + step / 2; v += step) values.push_back(v);
  return values;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> values;
  for (double v : parse_grid(text)) {
    double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9)
      throw ParseError("grid: expected integers, got a fractional value");
    values.push_back(static_cast<int>(rounded));
  }
  return values;
}

}  // namespace ffcorr
