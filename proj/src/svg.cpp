#include "mola/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mola/errors.hpp"

namespace mola {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Roughly five "nice" ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string render_svg(const LineChart& chart) {
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = chart.width - left - right;
  const double ph = chart.height - top - bottom;

  // Transformed data and bounds.
  std::vector<std::vector<std::pair<double, double>>> pts(chart.series.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const Series& ser = chart.series[s];
    const std::size_t n = std::min(ser.xs.size(), ser.ys.size());
    for (std::size_t i = 0; i < n; ++i) {
      double y = ser.ys[i];
      const double x = ser.xs[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (chart.log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      pts[s].emplace_back(x, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  }
  if (xmax - xmin <= 0.0) xmax = xmin + 1.0;
  if (ymax - ymin <= 0.0) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  if (chart.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax - ymin < 1.0) ymax = ymin + 1.0;
  }
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
      << chart.height << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(chart.title) << "</text>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : linear_ticks(xmin, xmax)) {
    out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(px(t))
        << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>";
    out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  std::vector<double> yticks;
  if (chart.log_y) {
    const int stride = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 8.0)));
    for (double e = ymin; e <= ymax + 1e-9; e += stride) yticks.push_back(e);
  } else {
    yticks = linear_ticks(ymin, ymax);
  }
  for (double t : yticks) {
    out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>";
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + pw)
        << "\" y2=\"" << num(py(t)) << "\" stroke=\"#dddddd\"/>";
    const std::string label = chart.log_y ? "1e" + tick_label(t) : tick_label(t);
    out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(chart.height - 15.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(chart.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << num(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(chart.log_y ? chart.y_label + " (log10)" : chart.y_label) << "</text>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    if (!pts[s].empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts[s].size(); ++i)
        out << (i ? " " : "") << num(px(pts[s][i].first)) << ',' << num(py(pts[s][i].second));
      out << "\"/>\n";
    }
    const double ly = top + 10 + 20.0 * static_cast<double>(s);
    out << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(left + pw + 36) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>";
    out << "<text x=\"" << num(left + pw + 42) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(chart.series[s].name)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg_file(const std::string& path, const LineChart& chart) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << render_svg(chart);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace mola
