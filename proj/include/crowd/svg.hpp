#pragma once

#include <string>
#include <utility>
#include <vector>

namespace crowd {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> pts;
};

struct AxesSpec {
  std::string x_label;
  std::string y_label;
  std::string title;
  bool bars = false;  // grouped bars per x position instead of polylines
};

// self-contained deterministic SVG: fixed canvas, nice-number ticks, legend
std::string render_plot_svg(const std::vector<Series>& series, const AxesSpec& axes);

void emit_plot_svg(const std::vector<Series>& series, const AxesSpec& axes,
                   const std::string& path);

}  // namespace crowd
