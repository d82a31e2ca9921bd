#pragma once

#include <string>
#include <vector>

namespace mola {

struct Series {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  int width = 720;
  int height = 480;
  std::vector<Series> series;
};

/// Standalone SVG document with one polyline per series, axes with ticks and
/// a legend. With log_y, non-positive or non-finite points are dropped.
std::string render_svg(const LineChart& chart);

void write_svg_file(const std::string& path, const LineChart& chart);

std::string xml_escape(const std::string& text);

}  // namespace mola
