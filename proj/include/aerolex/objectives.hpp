#pragma once

#include <string>
#include <vector>

#include "aerolex/geo.hpp"
#include "aerolex/grid.hpp"
#include "aerolex/nurbs.hpp"
#include "aerolex/vec.hpp"

namespace aerolex::objectives {

/// Trapezoidal line integral of the trilinearly interpolated field along the
/// waypoints. Throws InputError naming the first out-of-bounds waypoint.
double line_integral(const ScalarGrid3D& grid, const Waypoints& path);

struct RadioParameters {
  double d0 = -200.0;         // best signal value (< 0)
  double mu = 1.0;            // 1/m
  double cell_height = 75.0;  // m
};

/// D(p) = D0 / (mu * r + 1)^2, r the 3D distance to the nearest tower placed
/// at the cell height.
ScalarGrid3D build_radio_grid(const std::vector<Vec2>& towers, const GridSpec3D& spec,
                              const RadioParameters& params);

struct NoiseParameters {
  std::vector<std::string> road_tags{"primary", "secondary"};
  double road_buffer = 15.0;  // m
  double road_value = 0.2;
  double default_value = 1.0;
};

/// Base 0.2 near roads, 1.0 elsewhere, fading linearly to 0 at the grid top.
ScalarGrid3D build_noise_grid(const geo::FeatureMap& map, const GridSpec3D& spec,
                              const NoiseParameters& params = {});

struct RiskParameters {
  std::vector<std::string> low_risk_tags{"building", "water"};
  double low_value = 0.2;
  double default_value = 1.0;
  double blur_per_meter = 0.25;  // Gaussian sigma (m) per meter of altitude
};

/// Base 0.2 over buildings/water, 1.0 elsewhere; each slice is the base blurred
/// with sigma = z / 4 and scaled by (1 + z / z_max).
ScalarGrid3D build_risk_grid(const geo::FeatureMap& map, const GridSpec3D& spec,
                             const RiskParameters& params = {});

/// Separable Gaussian blur of an nx-by-ny field (x fastest) with symmetric
/// boundary extension. Sigma is given in cells per axis.
std::vector<double> gaussian_blur(const std::vector<double>& values, std::size_t nx,
                                  std::size_t ny, double sigma_x, double sigma_y);

struct UavParameters {
  double mass = 1.2;                // kg
  double cruise_velocity = 14.0;    // m/s
  double energy_coefficient = 9.12; // J/m
};

/// 1/2 m v^2 + c_E (|horizontal| + 10 |climb| + 15 |descent|).
double energy_cost(const Waypoints& path, const UavParameters& uav);

/// 1 - P at every node; values outside [0, 1] throw InputError.
ScalarGrid3D compliance_cost_grid(const ScalarGrid3D& probability);

/// Arc-length resampling with spacing <= delta; endpoints kept exactly.
Waypoints resample_path(const nurbs::NurbsCurve& curve, double delta);

/// Same contract for a polyline.
Waypoints resample_polyline(const Waypoints& path, double delta);

double path_length(const Waypoints& path);

}  // namespace aerolex::objectives
