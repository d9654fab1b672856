#pragma once

#include <string>
#include <vector>

namespace ddqn::svg {

struct Series {
  std::string label;
  std::string color;  // SVG color, e.g. "#1f77b4"
  std::vector<double> x;
  std::vector<double> y;
};

/// Dependency-free SVG line chart: axes, min/max tick labels, one polyline
/// per series and a legend. Output is deterministic for fixed inputs.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series,
                       int width = 800, int height = 480);

}  // namespace ddqn::svg
