#include "aerolex/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aerolex/errors.hpp"
#include "aerolex/parallel.hpp"
#include "aerolex/starmap.hpp"

namespace aerolex::objectives {

double line_integral(const ScalarGrid3D& grid, const Waypoints& path) {
  if (path.size() < 2) throw InputError("a path needs at least two waypoints");
  std::vector<double> values(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!grid.spec().contains(path[i])) {
      std::ostringstream os;
      os << "waypoint " << i << " (" << path[i].x << ", " << path[i].y << ", " << path[i].z
         << ") is outside the grid";
      throw InputError(os.str());
    }
    values[i] = trilinear(grid, path[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    sum += 0.5 * (values[i - 1] + values[i]) * distance(path[i - 1], path[i]);
  }
  return sum;
}

ScalarGrid3D build_radio_grid(const std::vector<Vec2>& towers, const GridSpec3D& spec,
                              const RadioParameters& params) {
  if (towers.empty()) throw InputError("radio grid needs at least one tower");
  if (!(params.d0 < 0.0)) throw InputError("radio D0 must be negative");
  if (!(params.mu > 0.0)) throw InputError("radio scaling factor must be positive");
  spec.check();
  ScalarGrid3D grid(spec, 0.0);
  parallel_for(spec.size(), [&](std::size_t n) {
    const Vec3 p = spec.node(n);
    double r = std::numeric_limits<double>::infinity();
    for (const auto& t : towers) r = std::min(r, distance(p, Vec3{t.x, t.y, params.cell_height}));
    const double s = params.mu * r + 1.0;
    grid.values()[n] = params.d0 / (s * s);
  });
  return grid;
}

namespace {

double altitude_fraction(const GridSpec3D& spec, std::size_t k) {
  const double top = spec.max_corner().z;
  if (!(top > 0.0)) return 0.0;
  return std::max(0.0, spec.node(0, 0, k).z) / top;
}

}  // namespace

ScalarGrid3D build_noise_grid(const geo::FeatureMap& map, const GridSpec3D& spec,
                              const NoiseParameters& params) {
  spec.check();
  std::vector<const geo::GeoFeature*> roads;
  for (const auto& tag : params.road_tags) {
    for (const auto* f : map.features_with_tag(tag)) roads.push_back(f);
  }
  const GridSpec2D plane = spec.horizontal();
  std::vector<double> base(plane.size(), params.default_value);
  if (!roads.empty()) {
    std::vector<geo::GeoFeature> road_copies;
    for (const auto* f : roads) {
      geo::GeoFeature g = *f;
      g.tags = {"road"};
      road_copies.push_back(std::move(g));
    }
    // Road copies may share ids across tags; rename to keep the map valid.
    for (std::size_t i = 0; i < road_copies.size(); ++i) road_copies[i].id = std::to_string(i);
    const geo::FeatureMap road_map(map.origin(), map.bounds(), std::move(road_copies));
    parallel_for(plane.size(), [&](std::size_t n) {
      if (starmap::eval_distance(plane.node(n), "road", road_map) <= params.road_buffer) {
        base[n] = params.road_value;
      }
    });
  }
  ScalarGrid3D grid(spec, 0.0);
  for (std::size_t k = 0; k < spec.nz; ++k) {
    const double factor = std::max(0.0, 1.0 - altitude_fraction(spec, k));
    for (std::size_t n = 0; n < plane.size(); ++n) {
      grid.values()[k * plane.size() + n] = base[n] * factor;
    }
  }
  return grid;
}

std::vector<double> gaussian_blur(const std::vector<double>& values, std::size_t nx,
                                  std::size_t ny, double sigma_x, double sigma_y) {
  auto kernel = [](double sigma) {
    std::vector<double> k;
    if (!(sigma > 1e-9)) return std::vector<double>{1.0};
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
      k.push_back(std::exp(-0.5 * (i / sigma) * (i / sigma)));
      sum += k.back();
    }
    for (auto& v : k) v /= sum;
    return k;
  };
  // Half-sample symmetric reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
  auto reflect = [](long i, long n) {
    const long period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
  };
  auto pass = [&](const std::vector<double>& in, bool along_x, const std::vector<double>& k) {
    if (k.size() == 1) return in;
    std::vector<double> out(in.size(), 0.0);
    const long radius = static_cast<long>(k.size() / 2);
    const long len = static_cast<long>(along_x ? nx : ny);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const long pos = static_cast<long>(along_x ? i : j);
        double acc = 0.0;
        for (long t = -radius; t <= radius; ++t) {
          const long q = reflect(pos + t, len);
          const std::size_t idx = along_x ? j * nx + static_cast<std::size_t>(q)
                                          : static_cast<std::size_t>(q) * nx + i;
          acc += k[static_cast<std::size_t>(t + radius)] * in[idx];
        }
        out[j * nx + i] = acc;
      }
    }
    return out;
  };
  return pass(pass(values, true, kernel(sigma_x)), false, kernel(sigma_y));
}

ScalarGrid3D build_risk_grid(const geo::FeatureMap& map, const GridSpec3D& spec,
                             const RiskParameters& params) {
  spec.check();
  const GridSpec2D plane = spec.horizontal();
  std::vector<double> base(plane.size(), params.default_value);
  parallel_for(plane.size(), [&](std::size_t n) {
    for (const auto& tag : params.low_risk_tags) {
      if (starmap::eval_over(plane.node(n), tag, map)) {
        base[n] = params.low_value;
        return;
      }
    }
  });
  // Slices are blurred progressively: blurring by sqrt(s_k^2 - s_{k-1}^2) on
  // top of the previous slice composes to sigma s_k.
  ScalarGrid3D grid(spec, 0.0);
  std::vector<double> blurred = base;
  double previous_sigma = 0.0;
  for (std::size_t k = 0; k < spec.nz; ++k) {
    const double z = std::max(0.0, spec.node(0, 0, k).z);
    const double sigma = params.blur_per_meter * z;
    const double step = std::sqrt(std::max(0.0, sigma * sigma - previous_sigma * previous_sigma));
    blurred = gaussian_blur(blurred, plane.nx, plane.ny, step / spec.resolution.x,
                            step / spec.resolution.y);
    previous_sigma = std::max(previous_sigma, sigma);
    const double factor = 1.0 + altitude_fraction(spec, k);
    for (std::size_t n = 0; n < plane.size(); ++n) {
      grid.values()[k * plane.size() + n] = blurred[n] * factor;
    }
  }
  return grid;
}

double energy_cost(const Waypoints& path, const UavParameters& uav) {
  if (!(uav.mass > 0.0) || !(uav.cruise_velocity > 0.0) || !(uav.energy_coefficient > 0.0)) {
    throw InputError("UAV mass, cruise velocity and energy coefficient must be positive");
  }
  double horizontal = 0.0, climb = 0.0, descent = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec3 d = path[i] - path[i - 1];
    horizontal += std::hypot(d.x, d.y);
    if (d.z > 0.0) {
      climb += d.z;
    } else {
      descent -= d.z;
    }
  }
  return 0.5 * uav.mass * uav.cruise_velocity * uav.cruise_velocity +
         uav.energy_coefficient * (horizontal + 10.0 * climb + 15.0 * descent);
}

ScalarGrid3D compliance_cost_grid(const ScalarGrid3D& probability) {
  ScalarGrid3D cost(probability.spec(), 0.0);
  const auto& p = probability.values();
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (!(p[n] >= 0.0 && p[n] <= 1.0)) {
      throw InputError("probability " + format_double(p[n]) + " at node " + std::to_string(n) +
                       " is outside [0, 1]");
    }
    cost.values()[n] = 1.0 - p[n];
  }
  return cost;
}

double path_length(const Waypoints& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += distance(path[i - 1], path[i]);
  return len;
}

namespace {

// Places ceil(L / delta) + 1 points at equal arc length along a dense polyline
// with parameters; `at` maps a parameter to a point.
template <typename At>
Waypoints resample_dense(const std::vector<double>& params, const Waypoints& dense, double delta,
                         Vec3 first, Vec3 last, At at) {
  if (!(delta > 0.0)) throw InputError("waypoint resolution must be positive");
  std::vector<double> cumulative(dense.size(), 0.0);
  for (std::size_t i = 1; i < dense.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + distance(dense[i - 1], dense[i]);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw InputError("cannot resample a zero-length path");
  const auto segments = static_cast<std::size_t>(
      std::max(1.0, std::ceil(total / delta * (1.0 - 1e-12))));
  Waypoints out;
  out.reserve(segments + 1);
  out.push_back(first);
  std::size_t seg = 1;
  for (std::size_t s = 1; s < segments; ++s) {
    const double target = total * static_cast<double>(s) / static_cast<double>(segments);
    while (seg + 1 < cumulative.size() && cumulative[seg] < target) ++seg;
    const double span = cumulative[seg] - cumulative[seg - 1];
    const double t = span > 0.0 ? (target - cumulative[seg - 1]) / span : 0.0;
    out.push_back(at(seg, t, params[seg - 1] + t * (params[seg] - params[seg - 1])));
  }
  out.push_back(last);
  return out;
}

}  // namespace

Waypoints resample_path(const nurbs::NurbsCurve& curve, double delta) {
  curve.check();
  const std::size_t spans = curve.control_points.size() - static_cast<std::size_t>(curve.degree);
  const std::size_t samples = std::max<std::size_t>(64, 32 * spans);
  std::vector<double> params(samples + 1);
  Waypoints dense(samples + 1);
  for (std::size_t i = 0; i <= samples; ++i) {
    params[i] = curve.u_min() +
                (curve.u_max() - curve.u_min()) * static_cast<double>(i) / static_cast<double>(samples);
    dense[i] = curve.evaluate(params[i]);
  }
  return resample_dense(params, dense, delta, curve.control_points.front(),
                        curve.control_points.back(),
                        [&](std::size_t, double, double u) { return curve.evaluate(u); });
}

Waypoints resample_polyline(const Waypoints& path, double delta) {
  if (path.size() < 2) throw InputError("a path needs at least two waypoints");
  std::vector<double> params(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) params[i] = static_cast<double>(i);
  return resample_dense(params, path, delta, path.front(), path.back(),
                        [&](std::size_t seg, double t, double) {
                          return path[seg - 1] + t * (path[seg] - path[seg - 1]);
                        });
}

}  // namespace aerolex::objectives
