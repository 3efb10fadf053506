#pragma once

#include <string>
#include <vector>

namespace spdc {

/// Minimal static SVG plotting for the figure commands. No interactivity;
/// the plots are regenerated from the CSV artifacts.

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // optional, same length as y when present
  std::string color = "#5b2a86";
  std::string label;
  bool line = true;
  bool markers = true;
  bool secondary_axis = false;  // plot against the right-hand axis
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string y2_label;
  std::vector<Series> series;
  std::vector<double> hlines;  // horizontal guides on the primary axis
  bool log_y = false;

  void render(const std::string& path) const;
};

struct HeatMap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;       // column coordinates (size nx)
  std::vector<double> y;       // row coordinates (size ny)
  std::vector<double> values;  // row-major ny x nx; NaN = unmeasured (black)
  std::string color = "#a01a1a";

  void render(const std::string& path) const;
};

}  // namespace spdc
