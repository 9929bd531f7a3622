#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "internal.hpp"

namespace aerolex::cli {

namespace {

// Perceptually ordered palette, dark blue to yellow.
constexpr std::array<std::array<double, 3>, 5> kPalette = {{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};

std::array<unsigned char, 3> color_of(double t) {
  t = std::clamp(t, 0.0, 1.0) * static_cast<double>(kPalette.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), kPalette.size() - 2);
  const double f = t - static_cast<double>(i);
  std::array<unsigned char, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const double v = kPalette[i][c] + f * (kPalette[i + 1][c] - kPalette[i][c]);
    out[c] = static_cast<unsigned char>(std::lround(v));
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string slice_ppm(const ScalarGrid3D& grid, double altitude) {
  const auto& s = grid.spec();
  std::vector<double> slice(s.nx * s.ny);
  for (std::size_t j = 0; j < s.ny; ++j) {
    for (std::size_t i = 0; i < s.nx; ++i) {
      Vec3 p = s.node(i, j, 0);
      p.z = altitude;
      slice[j * s.nx + i] = trilinear(grid, p);
    }
  }
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double v : slice) {
    if (!std::isfinite(v)) continue;
    lo = any ? std::min(lo, v) : v;
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  std::ostringstream out;
  out << "P6\n" << s.nx << " " << s.ny << "\n255\n";
  for (std::size_t row = 0; row < s.ny; ++row) {
    const std::size_t j = s.ny - 1 - row;
    for (std::size_t i = 0; i < s.nx; ++i) {
      const double v = slice[j * s.nx + i];
      std::array<unsigned char, 3> c{255, 255, 255};
      if (std::isfinite(v)) c = color_of(hi > lo ? (v - lo) / (hi - lo) : 0.5);
      out.write(reinterpret_cast<const char*>(c.data()), 3);
    }
  }
  return out.str();
}

std::string curves_svg(const std::vector<CurveSeries>& series, const std::string& x_label,
                       const std::string& y_label) {
  constexpr double W = 480, H = 360, L = 60, R = 20, T = 20, B = 50;
  auto px = [&](double x) { return L + x * (W - L - R); };
  auto py = [&](double y) { return H - B - y * (H - T - B); };
  static const std::array<const char*, 6> colors = {"#1f77b4", "#d62728", "#2ca02c",
                                                    "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = k / 4.0;
    out << "<text x=\"" << fmt(px(v)) << "\" y=\"" << H - B + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << fmt(py(v) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  out << "<text x=\"" << fmt((L + W - R) / 2) << "\" y=\"" << H - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << fmt((T + H - B) / 2) << "\" font-size=\"12\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt((T + H - B) / 2) << ")\">"
      << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = colors[k % colors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      out << (i ? " " : "") << fmt(px(series[k].x[i])) << "," << fmt(py(series[k].y[i]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << L + 8 << "\" y=\"" << T + 16 + 14 * static_cast<double>(k)
        << "\" font-size=\"11\" fill=\"" << color << "\">" << series[k].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string overlay_svg(const std::vector<PathRecord>& paths, const geo::Bounds& bounds,
                        double threshold) {
  constexpr double size = 480, margin = 10;
  const double sx = bounds.x_max - bounds.x_min, sy = bounds.y_max - bounds.y_min;
  const double scale = (size - 2 * margin) / std::max(sx, sy);
  auto px = [&](double x) { return margin + (x - bounds.x_min) * scale; };
  auto py = [&](double y) { return margin + (bounds.y_max - y) * scale; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(sx * scale + 2 * margin)
      << "\" height=\"" << fmt(sy * scale + 2 * margin) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << fmt(sx * scale)
      << "\" height=\"" << fmt(sy * scale) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& p : paths) {
    const char* color = p.score >= threshold ? "#1f4fd6" : "#d62728";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" "
        << "data-member=\"" << p.member << "\" data-score=\"" << fmt(p.score) << "\" points=\"";
    for (std::size_t i = 0; i < p.waypoints.size(); ++i) {
      out << (i ? " " : "") << fmt(px(p.waypoints[i].x)) << "," << fmt(py(p.waypoints[i].y));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace aerolex::cli
