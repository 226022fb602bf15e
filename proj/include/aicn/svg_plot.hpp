#pragma once

#include <string>
#include <vector>

namespace aicn {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 760;
  int height = 480;
};

// Self-contained SVG line chart: axes, tick grid, legend, one polyline per
// series. Points that are non-finite (or non-positive on a log axis) are
// dropped; callers that want them visible must clamp first.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace aicn
