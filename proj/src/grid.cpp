#include "aerolex/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aerolex/errors.hpp"

namespace aerolex {

namespace {

// Snaps coordinates within a few ulps of the upper edge so that points built
// as origin + n * res are accepted.
bool within(double v, double lo, double hi) {
  const double slack = 1e-9 * std::max(1.0, std::abs(hi));
  return v >= lo - slack && v <= hi + slack;
}

// Cell index and fractional offset along one axis.
void locate(double v, double origin, double res, std::size_t n, std::size_t& cell, double& t) {
  if (n == 1) {
    cell = 0;
    t = 0.0;
    return;
  }
  double u = (v - origin) / res;
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  double whole = std::floor(u);
  if (whole >= static_cast<double>(n - 1)) whole = static_cast<double>(n - 2);
  cell = static_cast<std::size_t>(whole);
  t = u - whole;
}

}  // namespace

bool GridSpec2D::contains(Vec2 p) const {
  return within(p.x, ox, x_max()) && within(p.y, oy, y_max());
}

void GridSpec2D::check() const {
  if (!(rx > 0.0) || !(ry > 0.0) || nx < 1 || ny < 1) {
    throw InputError("2D grid needs positive resolutions and non-empty counts");
  }
}

GridSpec3D GridSpec3D::from_bounds(Vec3 min, Vec3 max, Vec3 res) {
  if (!(res.x > 0.0) || !(res.y > 0.0) || !(res.z > 0.0)) {
    throw InputError("grid resolutions must be positive");
  }
  auto count = [](double lo, double hi, double r) {
    return static_cast<std::size_t>(std::floor(std::abs(hi - lo) / r + 1e-9)) + 1;
  };
  GridSpec3D spec;
  spec.origin = min;
  spec.resolution = res;
  spec.nx = count(min.x, max.x, res.x);
  spec.ny = count(min.y, max.y, res.y);
  spec.nz = count(min.z, max.z, res.z);
  spec.check();
  return spec;
}

bool GridSpec3D::contains(Vec3 p) const {
  const Vec3 hi = max_corner();
  return within(p.x, origin.x, hi.x) && within(p.y, origin.y, hi.y) &&
         within(p.z, origin.z, hi.z);
}

void GridSpec3D::check() const {
  if (!(resolution.x > 0.0) || !(resolution.y > 0.0) || !(resolution.z > 0.0)) {
    throw InputError("grid resolutions must be positive");
  }
  if (nx < 2 || ny < 2 || nz < 2) throw InputError("grid needs at least 2 nodes per axis");
}

ScalarGrid3D::ScalarGrid3D(GridSpec3D spec, double fill)
    : spec_(spec), values_(spec.size(), fill) {}

ScalarGrid3D::ScalarGrid3D(GridSpec3D spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) throw InputError("grid value count does not match spec");
}

double trilinear(const ScalarGrid3D& grid, Vec3 p) {
  const auto& s = grid.spec();
  if (!s.contains(p)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ", " << p.z << ") is outside the grid";
    throw InputError(os.str());
  }
  std::size_t i, j, k;
  double tx, ty, tz;
  locate(p.x, s.origin.x, s.resolution.x, s.nx, i, tx);
  locate(p.y, s.origin.y, s.resolution.y, s.ny, j, ty);
  locate(p.z, s.origin.z, s.resolution.z, s.nz, k, tz);
  const std::size_t i1 = std::min(i + 1, s.nx - 1);
  const std::size_t j1 = std::min(j + 1, s.ny - 1);
  const std::size_t k1 = std::min(k + 1, s.nz - 1);
  auto lerp = [](double a, double b, double t) {
    if (t == 0.0) return a;
    return t == 1.0 ? b : a + t * (b - a);
  };
  const double c00 = lerp(grid.at(i, j, k), grid.at(i1, j, k), tx);
  const double c10 = lerp(grid.at(i, j1, k), grid.at(i1, j1, k), tx);
  const double c01 = lerp(grid.at(i, j, k1), grid.at(i1, j, k1), tx);
  const double c11 = lerp(grid.at(i, j1, k1), grid.at(i1, j1, k1), tx);
  return lerp(lerp(c00, c10, ty), lerp(c01, c11, ty), tz);
}

double bilinear(const GridSpec2D& s, const std::vector<double>& values, Vec2 p) {
  if (!s.contains(p)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") is outside the layer grid";
    throw InputError(os.str());
  }
  std::size_t i, j;
  double tx, ty;
  locate(p.x, s.ox, s.rx, s.nx, i, tx);
  locate(p.y, s.oy, s.ry, s.ny, j, ty);
  const std::size_t i1 = std::min(i + 1, s.nx - 1);
  const std::size_t j1 = std::min(j + 1, s.ny - 1);
  auto v = [&](std::size_t a, std::size_t b) { return values[s.index(a, b)]; };
  auto lerp = [](double a, double b, double t) {
    if (t == 0.0) return a;
    return t == 1.0 ? b : a + t * (b - a);
  };
  return lerp(lerp(v(i, j), v(i1, j), tx), lerp(v(i, j1), v(i1, j1), tx), ty);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_grid3(std::ostream& out, const ScalarGrid3D& grid) {
  const auto& s = grid.spec();
  out << "GRID3 " << s.nx << ' ' << s.ny << ' ' << s.nz << ' ' << format_double(s.origin.x)
      << ' ' << format_double(s.origin.y) << ' ' << format_double(s.origin.z) << ' '
      << format_double(s.resolution.x) << ' ' << format_double(s.resolution.y) << ' '
      << format_double(s.resolution.z) << '\n';
  const auto& v = grid.values();
  for (std::size_t n = 0; n < v.size(); ++n) {
    out << format_double(v[n]) << ((n + 1) % s.nx == 0 ? '\n' : ' ');
  }
}

namespace {

double read_number(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw InputError(std::string("grid file truncated reading ") + what);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw InputError("grid file: bad number '" + token + "'");
  }
  return v;
}

std::size_t read_count(std::istream& in) {
  const double v = read_number(in, "header");
  if (v < 1 || v != std::floor(v)) throw InputError("grid file: bad node count");
  return static_cast<std::size_t>(v);
}

}  // namespace

ScalarGrid3D read_grid3(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "GRID3") throw InputError("not a GRID3 file");
  GridSpec3D s;
  s.nx = read_count(in);
  s.ny = read_count(in);
  s.nz = read_count(in);
  s.origin = {read_number(in, "header"), read_number(in, "header"), read_number(in, "header")};
  s.resolution = {read_number(in, "header"), read_number(in, "header"),
                  read_number(in, "header")};
  std::vector<double> values(s.size());
  for (auto& v : values) v = read_number(in, "values");
  return ScalarGrid3D(s, std::move(values));
}

void write_grid2(std::ostream& out, const GridSpec2D& s, const std::vector<double>& values) {
  out << "GRID2 " << s.nx << ' ' << s.ny << ' ' << format_double(s.ox) << ' '
      << format_double(s.oy) << ' ' << format_double(s.rx) << ' ' << format_double(s.ry)
      << '\n';
  for (std::size_t n = 0; n < values.size(); ++n) {
    out << format_double(values[n]) << ((n + 1) % s.nx == 0 ? '\n' : ' ');
  }
}

std::vector<double> read_grid2(std::istream& in, GridSpec2D& s) {
  std::string magic;
  in >> magic;
  if (magic != "GRID2") throw InputError("not a GRID2 file");
  s.nx = read_count(in);
  s.ny = read_count(in);
  s.ox = read_number(in, "header");
  s.oy = read_number(in, "header");
  s.rx = read_number(in, "header");
  s.ry = read_number(in, "header");
  std::vector<double> values(s.size());
  for (auto& v : values) v = read_number(in, "values");
  return values;
}

void save_grid3(const std::string& path, const ScalarGrid3D& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_grid3(out, grid);
}

ScalarGrid3D load_grid3(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open grid file '" + path + "'");
  return read_grid3(in);
}

}  // namespace aerolex
