#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aerolex/grid.hpp"
#include "aerolex/nurbs.hpp"
#include "aerolex/pareto.hpp"
#include "aerolex/vec.hpp"

namespace aerolex::router {

/// Distinct simplex weights: corners, centroid, then simplex-lattice points
/// of increasing resolution until `count` vectors exist.
std::vector<std::vector<double>> generate_weight_vectors(std::size_t count, std::size_t objectives);

struct GridNode {
  std::size_t i = 0, j = 0, k = 0;
  friend bool operator==(GridNode, GridNode) = default;
};

/// Nearest lattice node to a point inside the grid.
GridNode nearest_node(const GridSpec3D& spec, Vec3 p);

struct PolyPath {
  std::vector<std::size_t> nodes;  // flat grid indices
  Waypoints points;
  double cost = 0.0;
};

/// Minimum-cost path over the 26-neighbourhood with edge cost
/// |u - v| (c(u) + c(v)) / 2. Infinite node costs are impassable.
/// Throws InfeasibleError if the goal cannot be reached.
PolyPath dijkstra_grid(const ScalarGrid3D& cost, GridNode start, GridNode goal);

/// One pass of the [1 2 1] / 4 kernel over interior points; ends fixed.
Waypoints smooth_polypath(const Waypoints& path);

struct Box {
  Vec3 min{}, max{};
  Vec3 clamp(Vec3 p) const;
  bool contains(Vec3 p) const;
};

/// Interior control points (x, y, z flattened) plus the fixed knot vector.
struct Individual {
  std::vector<double> genome;
  std::vector<double> knots;
  ObjectiveVector objectives;
};

struct ObjectiveEvaluator {
  std::string name;
  std::function<double(const Waypoints&)> evaluate;
};

/// Curve with the given terminals and the genome as interior control points.
nurbs::NurbsCurve curve_of(const Individual& ind, Vec3 start, Vec3 goal, int degree = 2);

Individual individual_of(const nurbs::NurbsCurve& curve);

/// Resamples the curve at `delta` and evaluates every objective in order.
/// An evaluator that throws InputError (e.g. a waypoint outside a grid)
/// yields +inf for that objective.
ObjectiveVector evaluate_individual(const Individual& ind, Vec3 start, Vec3 goal,
                                    const std::vector<ObjectiveEvaluator>& objectives,
                                    double delta, int degree = 2);

struct EvolveConfig {
  std::size_t population = 700;
  std::size_t generations = 100;
  double mutation_sigma = 10.0;
  double mutation_probability = 1.0;
  /// Per-gene probability; 0 means 1 / D.
  double gene_mutation_probability = 0.0;
  double crossover_probability = 0.9;
  double waypoint_resolution = 5.0;
  std::uint64_t seed = 0;
  Box bounds;
  int degree = 2;
};

struct ParetoSet {
  Vec3 start{}, goal{};
  int degree = 2;
  std::vector<Individual> members;
  std::vector<int> ranks;
  std::vector<double> crowding;

  std::vector<ObjectiveVector> objective_vectors() const;
  nurbs::NurbsCurve curve(std::size_t member) const;
};

/// Optional per-generation record of the external non-dominated archive.
struct EvolveTrace {
  std::optional<ObjectiveVector> hypervolume_reference;
  std::vector<double> archive_hypervolume;  // entry 0 = initial population
  ParetoArchive archive;
  /// Called after each generation with the current population.
  std::function<void(std::size_t, const std::vector<Individual>&)> on_generation;
};

/// Generational NSGA-II over interior control points. Returns front 0 of the
/// final population without repeated genomes. Deterministic given config.seed.
ParetoSet evolve(const std::vector<nurbs::NurbsCurve>& initial,
                 const std::vector<ObjectiveEvaluator>& objectives, const EvolveConfig& config,
                 EvolveTrace* trace = nullptr);

std::size_t knee_point(const ParetoSet& set);
std::vector<std::size_t> extreme_points(const ParetoSet& set);

struct GridObjective {
  std::string name;
  const ScalarGrid3D* grid = nullptr;
};

struct RouteConfig {
  std::size_t weighted_solutions = 70;
  double approximation_epsilon = 20.0;
  EvolveConfig evolve;
};

struct SeedPath {
  std::vector<double> weights;
  PolyPath polypath;
  Waypoints smoothed;
  nurbs::NurbsApproximation approximation;
};

struct RouteResult {
  std::vector<SeedPath> seeds;
  std::vector<nurbs::NurbsCurve> initial;  // seeds refit to a common n_P
  ParetoSet pareto;
};

/// Stage one: Dijkstra over min-max normalized weighted sums of the grid
/// objectives, smoothing and adaptive NURBS approximation. Stage two: NSGA-II
/// over all `objectives`. Start and goal are kept exactly.
RouteResult plan_routes(Vec3 start, Vec3 goal, const std::vector<GridObjective>& grids,
                        const std::vector<ObjectiveEvaluator>& objectives,
                        const RouteConfig& config, EvolveTrace* trace = nullptr);

}  // namespace aerolex::router
