#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "aerolex/vec.hpp"

namespace aerolex {

/// Horizontal lattice: node (i, j) sits at origin + (i * rx, j * ry).
struct GridSpec2D {
  double ox = 0.0, oy = 0.0;
  double rx = 1.0, ry = 1.0;
  std::size_t nx = 2, ny = 2;

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  Vec2 node(std::size_t i, std::size_t j) const {
    return {ox + static_cast<double>(i) * rx, oy + static_cast<double>(j) * ry};
  }
  Vec2 node(std::size_t flat) const { return node(flat % nx, flat / nx); }
  double x_max() const { return ox + static_cast<double>(nx - 1) * rx; }
  double y_max() const { return oy + static_cast<double>(ny - 1) * ry; }
  bool contains(Vec2 p) const;
  /// Throws InputError unless resolutions > 0 and counts >= 1.
  void check() const;

  friend bool operator==(const GridSpec2D&, const GridSpec2D&) = default;
};

/// Navigation lattice; values are stored x-fastest, then y, then z.
struct GridSpec3D {
  Vec3 origin{};
  Vec3 resolution{10.0, 10.0, 10.0};
  std::size_t nx = 2, ny = 2, nz = 2;

  /// Covers [min, max] per axis with floor(extent / res) + 1 nodes.
  static GridSpec3D from_bounds(Vec3 min, Vec3 max, Vec3 resolution);

  std::size_t size() const { return nx * ny * nz; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (k * ny + j) * nx + i;
  }
  Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin.x + static_cast<double>(i) * resolution.x,
            origin.y + static_cast<double>(j) * resolution.y,
            origin.z + static_cast<double>(k) * resolution.z};
  }
  Vec3 node(std::size_t flat) const {
    return node(flat % nx, (flat / nx) % ny, flat / (nx * ny));
  }
  Vec3 max_corner() const { return node(nx - 1, ny - 1, nz - 1); }
  bool contains(Vec3 p) const;
  GridSpec2D horizontal() const {
    return {origin.x, origin.y, resolution.x, resolution.y, nx, ny};
  }
  /// Throws InputError unless resolutions > 0 and counts >= 2.
  void check() const;

  friend bool operator==(const GridSpec3D&, const GridSpec3D&) = default;
};

/// Discrete scalar field over a GridSpec3D with trilinear interpolation.
class ScalarGrid3D {
 public:
  ScalarGrid3D() = default;
  ScalarGrid3D(GridSpec3D spec, double fill = 0.0);
  ScalarGrid3D(GridSpec3D spec, std::vector<double> values);

  const GridSpec3D& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[spec_.index(i, j, k)];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return values_[spec_.index(i, j, k)];
  }

 private:
  GridSpec3D spec_{};
  std::vector<double> values_;
};

/// Trilinear interpolation; exact at nodes. Out of bounds throws InputError.
double trilinear(const ScalarGrid3D& grid, Vec3 p);

/// Bilinear interpolation of a 2D field stored x-fastest.
double bilinear(const GridSpec2D& spec, const std::vector<double>& values, Vec2 p);

// Grid text format: "GRID3 nx ny nz ox oy oz rx ry rz" / "GRID2 nx ny ox oy rx ry"
// header line followed by whitespace-separated decimal values, x fastest.
void write_grid3(std::ostream& out, const ScalarGrid3D& grid);
ScalarGrid3D read_grid3(std::istream& in);
void write_grid2(std::ostream& out, const GridSpec2D& spec, const std::vector<double>& values);
std::vector<double> read_grid2(std::istream& in, GridSpec2D& spec);

void save_grid3(const std::string& path, const ScalarGrid3D& grid);
ScalarGrid3D load_grid3(const std::string& path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace aerolex
