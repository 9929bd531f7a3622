#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aerolex/geo.hpp"
#include "aerolex/grid.hpp"
#include "aerolex/objectives.hpp"
#include "aerolex/router.hpp"
#include "aerolex/starmap.hpp"

namespace aerolex {

/// Every tunable of a mission. The text form is a flat `key = value` file.
struct MissionConfig {
  geo::LatLon origin{48.8677, 2.3391};
  geo::Bounds bounds{0.0, 13000.0, 0.0, 13000.0, 0.0, 300.0};
  Vec3 resolution{10.0, 10.0, 10.0};
  double starmap_resolution = 10.0;

  double rotation_sigma = 0.0;
  double translation_sigma = 3.0;
  int map_samples = 50;

  objectives::UavParameters uav{};
  objectives::RadioParameters radio{};
  std::string radio_tower_tag = "tower";

  int degree = 2;
  double waypoint_resolution = 5.0;
  double nurbs_epsilon = 0.0;  // 0: twice the coarsest grid resolution
  double mutation_sigma = 10.0;
  double mutation_probability = 1.0;
  double gene_mutation_probability = 0.0;  // 0: 1 / D
  double crossover_probability = 0.9;
  std::size_t individuals = 700;
  std::size_t weighted_solutions = 70;
  std::size_t generations = 100;

  double clearance_threshold = 0.5;
  std::vector<std::string> setting;  // empty: first option of every group
  std::vector<std::string> allowed;  // restriction for optimize
  std::uint64_t seed = 0;
  unsigned threads = 0;
  int max_bits = 24;
  std::size_t explain_limit = 64;
  std::size_t rejection_samples = 1001;

  /// Objective name (or model reference stem) -> registry model.
  std::map<std::string, std::string> models;

  GridSpec3D navigation_grid() const;
  GridSpec2D starmap_grid() const;
  starmap::PerturbationModel perturbation() const;
  double effective_nurbs_epsilon() const;
  router::Box box() const;
  void check() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values throw InputError naming the line.
MissionConfig parse_config(const std::string& text);
MissionConfig load_config(const std::string& path);
/// Full text form, one key per line; parse_config(to_text(c)) == c.
std::string to_text(const MissionConfig& c);

}  // namespace aerolex
