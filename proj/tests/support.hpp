#pragma once

// Test-only reference implementations. They deliberately avoid the library's
// algorithms so that agreement is evidence of correctness.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aerolex/grid.hpp"
#include "aerolex/inference.hpp"
#include "aerolex/starmap.hpp"

namespace oracle {

/// Normal CDF from Boost.Math.
double normal_cdf(double x, double mean, double stddev);

/// Sums weight * truth over every joint assignment of the program.
double brute_force_wmc(const aerolex::inference::GroundProgram& gp);

/// Random acyclic program over `facts` Bernoulli facts, up to `max_defs`
/// definitions and an optional interval variable.
aerolex::inference::GroundProgram random_program(std::mt19937_64& rng, std::size_t facts,
                                                 std::size_t max_defs, bool with_interval);

/// Minimum walk cost by Bellman-Ford relaxation with the router's edge cost.
double min_walk_cost(const aerolex::ScalarGrid3D& cost, std::size_t start, std::size_t goal);

/// Minimum over every simple path, by depth-first enumeration. Small grids only.
double min_simple_path_cost(const aerolex::ScalarGrid3D& cost, std::size_t start,
                            std::size_t goal);

double edge_cost(const aerolex::ScalarGrid3D& cost, std::size_t u, std::size_t v);
bool adjacent(const aerolex::GridSpec3D& s, std::size_t u, std::size_t v);

/// Front ranks by repeatedly peeling the non-dominated set (O(n^3)).
std::vector<int> peel_ranks(const std::vector<std::vector<double>>& v);

/// Hypervolume by inclusion-exclusion over subsets (<= 12 points).
double inclusion_exclusion_hv(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& ref);

}  // namespace oracle

namespace fixture {

struct LayerSpec {
  aerolex::starmap::RelationKind kind;
  std::string tag;
  double value;
  double spread = 0.0;
};

/// StaR map over [0, extent]^2 whose layers are constant.
aerolex::starmap::StarMap constant_starmap(const std::vector<LayerSpec>& layers,
                                           double extent = 100.0, double res = 10.0);

/// Layer whose value is 1 for x < split and 0 otherwise.
aerolex::starmap::RelationLayer step_layer(const aerolex::GridSpec2D& grid, const std::string& tag,
                                           double split);

std::string read_file(const std::string& path);
std::string data(const std::string& name);

/// Scratch directory unique to the process and name, emptied on creation.
std::string scratch(const std::string& name);

}  // namespace fixture
