#pragma once

#include <string>
#include <utility>
#include <vector>

namespace magicmps::io {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
  bool markers = true;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG line plot. Output depends only on the argument, so reruns are byte-identical.
std::string render_svg(const PlotSpec& spec);

}  // namespace magicmps::io
