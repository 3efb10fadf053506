#include "spdc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 70.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad(double frac) {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
      return;
    }
    const double d = (hi - lo) * frac;
    lo -= d;
    hi += d;
  }
};

std::vector<double> ticks(const Range& r, int count = 5) {
  std::vector<double> t;
  const double span = r.hi - r.lo;
  if (!(span > 0.0)) return t;
  const double raw = span / count;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-12 * span;
       v += step) {
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return t;
}

std::ofstream open_svg(const std::string& path, double w, double h) {
  std::ofstream out(path);
  if (!out) throw NumericError("svg: cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

}  // namespace

void LinePlot::render(const std::string& path) const {
  Range xr, yr, y2r;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.include(s.x[i]);
      Range& r = s.secondary_axis ? y2r : yr;
      r.include(s.y[i]);
      if (i < s.yerr.size()) {
        r.include(s.y[i] + s.yerr[i]);
        r.include(s.y[i] - s.yerr[i]);
      }
    }
  }
  for (double h : hlines) yr.include(h);
  if (!log_y) yr.include(0.0);
  xr.pad(0.04);
  yr.pad(0.06);
  if (y2r.hi > y2r.lo) {
    y2r.include(0.0);
    y2r.pad(0.06);
  }

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto X = [&](double v) {
    return kMarginL + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  auto map_y = [&](double v, const Range& r) {
    double t;
    if (log_y) {
      const double lo = std::log10(std::max(r.lo, 1e-12));
      const double hi = std::log10(std::max(r.hi, 1e-11));
      t = (std::log10(std::max(v, 1e-12)) - lo) / (hi - lo);
    } else {
      t = (v - r.lo) / (r.hi - r.lo);
    }
    return kMarginT + (1.0 - t) * plot_h;
  };

  auto out = open_svg(path, kWidth, kHeight);
  // frame + ticks
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : ticks(xr)) {
    const double px = X(t);
    out << "<line x1=\"" << px << "\" y1=\"" << kMarginT + plot_h << "\" x2=\""
        << px << "\" y2=\"" << kMarginT + plot_h + 5 << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px << "\" y=\"" << kMarginT + plot_h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  if (!log_y) {
    for (double t : ticks(yr)) {
      const double py = map_y(t, yr);
      out << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << py << "\" x2=\""
          << kMarginL << "\" y2=\"" << py << "\" stroke=\"#333\"/>\n"
          << "<text x=\"" << kMarginL - 8 << "\" y=\"" << py + 4
          << "\" font-size=\"11\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
  }
  if (y2r.hi > y2r.lo) {
    for (double t : ticks(y2r)) {
      const double py = map_y(t, y2r);
      out << "<line x1=\"" << kMarginL + plot_w << "\" y1=\"" << py
          << "\" x2=\"" << kMarginL + plot_w + 5 << "\" y2=\"" << py
          << "\" stroke=\"#888\"/>\n"
          << "<text x=\"" << kMarginL + plot_w + 8 << "\" y=\"" << py + 4
          << "\" font-size=\"11\" fill=\"#666\">" << num(t) << "</text>\n";
    }
  }
  for (double h : hlines) {
    const double py = map_y(h, yr);
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << py << "\" x2=\""
        << kMarginL + plot_w << "\" y2=\"" << py
        << "\" stroke=\"#444\" stroke-dasharray=\"6 4\"/>\n";
  }

  double legend_y = kMarginT + 14;
  for (const auto& s : series) {
    const Range& r = s.secondary_axis ? y2r : yr;
    if (s.line && s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << X(s.x[i]) << ',' << map_y(s.y[i], r) << ' ';
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size() && i < s.yerr.size(); ++i) {
      if (!(s.yerr[i] > 0.0)) continue;
      out << "<line x1=\"" << X(s.x[i]) << "\" y1=\""
          << map_y(s.y[i] - s.yerr[i], r) << "\" x2=\"" << X(s.x[i])
          << "\" y2=\"" << map_y(s.y[i] + s.yerr[i], r) << "\" stroke=\""
          << s.color << "\"/>\n";
    }
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << "<circle cx=\"" << X(s.x[i]) << "\" cy=\"" << map_y(s.y[i], r)
            << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      out << "<circle cx=\"" << kMarginL + 12 << "\" cy=\"" << legend_y - 4
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n"
          << "<text x=\"" << kMarginL + 20 << "\" y=\"" << legend_y
          << "\" font-size=\"11\">" << s.label << "</text>\n";
      legend_y += 15;
    }
  }

  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" font-size=\"13\" "
         "text-anchor=\"middle\">" << title << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << y_label << "</text>\n";
  if (!y2_label.empty()) {
    out << "<text x=\"" << kWidth - 12 << "\" y=\"" << kHeight / 2
        << "\" font-size=\"12\" fill=\"#666\" text-anchor=\"middle\" "
           "transform=\"rotate(90 " << kWidth - 12 << ' ' << kHeight / 2
        << ")\">" << y2_label << "</text>\n";
  }
  out << "</svg>\n";
}

void HeatMap::render(const std::string& path) const {
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  if (values.size() != nx * ny) {
    throw NumericError("svg: heat map size mismatch");
  }
  double peak = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) peak = std::max(peak, v);
  }
  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  const double cell_w = plot_w / static_cast<double>(nx);
  const double cell_h = plot_h / static_cast<double>(ny);

  auto out = open_svg(path, kWidth, kHeight);
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << plot_w << "\" height=\"" << plot_h << "\" fill=\"black\"/>\n";
  for (std::size_t r = 0; r < ny; ++r) {
    for (std::size_t c = 0; c < nx; ++c) {
      const double v = values[r * nx + c];
      if (!std::isfinite(v)) continue;  // unmeasured cell stays black
      const double t = peak > 0.0 ? v / peak : 0.0;
      const int red = static_cast<int>(255.0 * std::min(1.0, 0.15 + 0.85 * t));
      const int green = static_cast<int>(235.0 * (1.0 - t) * 0.9);
      const int blue = static_cast<int>(235.0 * (1.0 - t));
      // row 0 at the bottom
      const double px = kMarginL + static_cast<double>(c) * cell_w;
      const double py = kMarginT + plot_h - static_cast<double>(r + 1) * cell_h;
      out << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\""
          << cell_w + 0.5 << "\" height=\"" << cell_h + 0.5 << "\" fill=\"rgb("
          << red << ',' << green << ',' << blue << ")\"/>\n";
    }
  }
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" font-size=\"13\" "
         "text-anchor=\"middle\">" << title << "</text>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << y_label << "</text>\n";
  // axis extent labels
  if (!x.empty()) {
    out << "<text x=\"" << kMarginL << "\" y=\"" << kMarginT + plot_h + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(x.front())
        << "</text>\n"
        << "<text x=\"" << kMarginL + plot_w << "\" y=\""
        << kMarginT + plot_h + 18 << "\" font-size=\"11\" "
        "text-anchor=\"middle\">" << num(x.back()) << "</text>\n";
  }
  if (!y.empty()) {
    out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << kMarginT + plot_h
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(y.front())
        << "</text>\n"
        << "<text x=\"" << kMarginL - 8 << "\" y=\"" << kMarginT + 10
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(y.back())
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace spdc
