#include "aerolex/router.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "aerolex/errors.hpp"
#include "aerolex/objectives.hpp"
#include "aerolex/parallel.hpp"

namespace aerolex::router {

namespace {

// All compositions of `total` into `parts` non-negative integers, first
// component descending.
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::size_t first = total + 1; first-- > 0;) {
    prefix.push_back(first);
    compositions(total - first, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<double>> generate_weight_vectors(std::size_t count, std::size_t objectives) {
  if (objectives == 0) throw InputError("need at least one grid objective");
  if (count < objectives) {
    throw InputError("the number of weighted solutions must be at least the number of grid "
                     "objectives");
  }
  std::vector<std::vector<double>> out;
  auto push_unique = [&](std::vector<double> w) {
    for (const auto& existing : out) {
      bool same = true;
      for (std::size_t i = 0; i < w.size() && same; ++i) same = std::abs(existing[i] - w[i]) < 1e-12;
      if (same) return;
    }
    out.push_back(std::move(w));
  };
  for (std::size_t e = 0; e < objectives && out.size() < count; ++e) {
    std::vector<double> w(objectives, 0.0);
    w[e] = 1.0;
    push_unique(std::move(w));
  }
  if (out.size() < count) push_unique(std::vector<double>(objectives, 1.0 / objectives));
  if (out.size() < count && objectives == 1) {
    throw InputError("a single grid objective admits only one weight vector");
  }
  for (std::size_t h = 2; out.size() < count; ++h) {
    std::vector<std::vector<std::size_t>> lattice;
    std::vector<std::size_t> prefix;
    compositions(h, objectives, prefix, lattice);
    for (const auto& c : lattice) {
      if (out.size() >= count) break;
      std::vector<double> w(objectives);
      for (std::size_t i = 0; i < objectives; ++i) {
        w[i] = static_cast<double>(c[i]) / static_cast<double>(h);
      }
      push_unique(std::move(w));
    }
  }
  return out;
}

GridNode nearest_node(const GridSpec3D& spec, Vec3 p) {
  if (!spec.contains(p)) throw InputError("point lies outside the navigation grid");
  auto snap = [](double v, double o, double r, std::size_t n) {
    const double u = std::round((v - o) / r);
    return static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(n - 1)));
  };
  return {snap(p.x, spec.origin.x, spec.resolution.x, spec.nx),
          snap(p.y, spec.origin.y, spec.resolution.y, spec.ny),
          snap(p.z, spec.origin.z, spec.resolution.z, spec.nz)};
}

PolyPath dijkstra_grid(const ScalarGrid3D& cost, GridNode start, GridNode goal) {
  const auto& s = cost.spec();
  auto in_grid = [&](GridNode n) { return n.i < s.nx && n.j < s.ny && n.k < s.nz; };
  if (!in_grid(start) || !in_grid(goal)) throw InputError("terminal node outside the grid");
  if (start == goal) throw InputError("start and goal coincide");
  const auto& values = cost.values();
  for (double v : values) {
    if (!(v >= 0.0)) throw InputError("Dijkstra costs must be non-negative");
  }
  const std::size_t src = s.index(start.i, start.j, start.k);
  const std::size_t dst = s.index(goal.i, goal.j, goal.k);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(s.size(), inf);
  std::vector<std::size_t> parent(s.size(), s.size());
  std::vector<char> settled(s.size(), 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  if (std::isinf(values[src]) || std::isinf(values[dst])) {
    throw InfeasibleError("start or goal lies in an impassable cell");
  }
  dist[src] = 0.0;
  open.push({0.0, src});

  // Neighbour offsets in lexicographic (dz, dy, dx) order.
  std::vector<std::array<int, 3>> offsets;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx || dy || dz) offsets.push_back({dx, dy, dz});
      }
    }
  }
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u == dst) break;
    const long ui = static_cast<long>(u % s.nx);
    const long uj = static_cast<long>((u / s.nx) % s.ny);
    const long uk = static_cast<long>(u / (s.nx * s.ny));
    for (const auto& o : offsets) {
      const long vi = ui + o[0], vj = uj + o[1], vk = uk + o[2];
      if (vi < 0 || vj < 0 || vk < 0 || vi >= static_cast<long>(s.nx) ||
          vj >= static_cast<long>(s.ny) || vk >= static_cast<long>(s.nz)) {
        continue;
      }
      const std::size_t v = s.index(static_cast<std::size_t>(vi), static_cast<std::size_t>(vj),
                                    static_cast<std::size_t>(vk));
      if (settled[v] || std::isinf(values[v])) continue;
      const double len = std::sqrt(std::pow(o[0] * s.resolution.x, 2) +
                                   std::pow(o[1] * s.resolution.y, 2) +
                                   std::pow(o[2] * s.resolution.z, 2));
      const double nd = d + len * (values[u] + values[v]) / 2.0;
      if (nd < dist[v] || (nd == dist[v] && u < parent[v])) {
        dist[v] = nd;
        parent[v] = u;
        open.push({nd, v});
      }
    }
  }
  if (std::isinf(dist[dst])) throw InfeasibleError("goal is unreachable from start");

  PolyPath path;
  path.cost = dist[dst];
  for (std::size_t v = dst; v != s.size(); v = parent[v]) {
    path.nodes.push_back(v);
    if (v == src) break;
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  for (std::size_t v : path.nodes) path.points.push_back(s.node(v));
  return path;
}

Waypoints smooth_polypath(const Waypoints& path) {
  Waypoints out = path;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    out[i] = 0.25 * (path[i - 1] + 2.0 * path[i] + path[i + 1]);
  }
  return out;
}

Vec3 Box::clamp(Vec3 p) const {
  return {std::clamp(p.x, min.x, max.x), std::clamp(p.y, min.y, max.y),
          std::clamp(p.z, min.z, max.z)};
}

bool Box::contains(Vec3 p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
         p.z <= max.z;
}

nurbs::NurbsCurve curve_of(const Individual& ind, Vec3 start, Vec3 goal, int degree) {
  nurbs::NurbsCurve c;
  c.degree = degree;
  c.knots = ind.knots;
  c.control_points.push_back(start);
  for (std::size_t g = 0; g + 2 < ind.genome.size(); g += 3) {
    c.control_points.push_back({ind.genome[g], ind.genome[g + 1], ind.genome[g + 2]});
  }
  c.control_points.push_back(goal);
  return c;
}

Individual individual_of(const nurbs::NurbsCurve& curve) {
  Individual ind;
  ind.knots = curve.knots;
  for (std::size_t i = 1; i + 1 < curve.control_points.size(); ++i) {
    const Vec3 p = curve.control_points[i];
    ind.genome.insert(ind.genome.end(), {p.x, p.y, p.z});
  }
  return ind;
}

ObjectiveVector evaluate_individual(const Individual& ind, Vec3 start, Vec3 goal,
                                    const std::vector<ObjectiveEvaluator>& objectives,
                                    double delta, int degree) {
  const Waypoints waypoints = objectives::resample_path(curve_of(ind, start, goal, degree), delta);
  ObjectiveVector out;
  out.reserve(objectives.size());
  for (const auto& o : objectives) {
    try {
      out.push_back(o.evaluate(waypoints));
    } catch (const InputError&) {
      out.push_back(std::numeric_limits<double>::infinity());
    }
  }
  return out;
}

std::vector<ObjectiveVector> ParetoSet::objective_vectors() const {
  std::vector<ObjectiveVector> out;
  for (const auto& m : members) out.push_back(m.objectives);
  return out;
}

nurbs::NurbsCurve ParetoSet::curve(std::size_t member) const {
  return curve_of(members.at(member), start, goal, degree);
}

std::size_t knee_point(const ParetoSet& set) { return knee_point(set.objective_vectors()); }

std::vector<std::size_t> extreme_points(const ParetoSet& set) {
  return extreme_points(set.objective_vectors());
}

namespace {

struct Ranking {
  std::vector<int> rank;
  std::vector<double> crowding;
};

Ranking rank_population(const std::vector<Individual>& pop) {
  std::vector<ObjectiveVector> vectors;
  for (const auto& ind : pop) vectors.push_back(ind.objectives);
  Ranking r;
  r.rank = non_dominated_sort(vectors);
  r.crowding.assign(pop.size(), 0.0);
  const int fronts = pop.empty() ? 0 : *std::max_element(r.rank.begin(), r.rank.end()) + 1;
  for (int f = 0; f < fronts; ++f) {
    std::vector<std::size_t> members;
    std::vector<ObjectiveVector> front;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (r.rank[i] == f) {
        members.push_back(i);
        front.push_back(vectors[i]);
      }
    }
    const auto cd = crowding_distance(front);
    for (std::size_t m = 0; m < members.size(); ++m) r.crowding[members[m]] = cd[m];
  }
  return r;
}

// Elitist truncation: whole fronts first, the last one by crowding distance.
std::vector<Individual> select_survivors(std::vector<Individual> pool, std::size_t n) {
  const Ranking r = rank_population(pool);
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b];
    return r.crowding[a] > r.crowding[b];
  });
  order.resize(std::min(n, order.size()));
  std::vector<Individual> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(std::move(pool[i]));
  return out;
}

class Variation {
 public:
  Variation(const EvolveConfig& cfg, std::size_t genes, std::mt19937_64& rng)
      : cfg_(cfg), rng_(rng) {
    gene_p_ = cfg.gene_mutation_probability > 0.0 ? cfg.gene_mutation_probability
                                                  : 1.0 / static_cast<double>(genes);
  }

  void crossover(Individual& a, Individual& b) {
    const std::size_t points = a.genome.size() / 3;
    if (points < 2 || uniform_(rng_) >= cfg_.crossover_probability) return;
    std::uniform_int_distribution<std::size_t> pick(1, points - 1);
    const std::size_t cut = pick(rng_) * 3;
    std::swap_ranges(a.genome.begin() + static_cast<long>(cut), a.genome.end(),
                     b.genome.begin() + static_cast<long>(cut));
  }

  void mutate(Individual& ind) {
    if (uniform_(rng_) >= cfg_.mutation_probability) return;
    for (std::size_t g = 0; g < ind.genome.size(); ++g) {
      if (uniform_(rng_) < gene_p_) ind.genome[g] += cfg_.mutation_sigma * normal_(rng_);
    }
    clamp(ind);
  }

  void clamp(Individual& ind) const {
    for (std::size_t g = 0; g + 2 < ind.genome.size(); g += 3) {
      const Vec3 p = cfg_.bounds.clamp({ind.genome[g], ind.genome[g + 1], ind.genome[g + 2]});
      ind.genome[g] = p.x;
      ind.genome[g + 1] = p.y;
      ind.genome[g + 2] = p.z;
    }
  }

 private:
  const EvolveConfig& cfg_;
  std::mt19937_64& rng_;
  double gene_p_ = 0.0;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

ParetoSet evolve(const std::vector<nurbs::NurbsCurve>& initial,
                 const std::vector<ObjectiveEvaluator>& objectives, const EvolveConfig& config,
                 EvolveTrace* trace) {
  if (initial.empty()) throw InputError("evolution needs at least one initial curve");
  if (objectives.empty()) throw InputError("evolution needs at least one objective");
  if (config.population < 2) throw InputError("population must hold at least two individuals");
  const Vec3 start = initial.front().control_points.front();
  const Vec3 goal = initial.front().control_points.back();
  const std::size_t n_ctrl = initial.front().control_points.size();
  for (const auto& c : initial) {
    c.check();
    if (!(c.control_points.front() == start) || !(c.control_points.back() == goal)) {
      throw InputError("initial curves do not share their end points");
    }
    if (c.control_points.size() != n_ctrl || c.degree != config.degree) {
      throw InputError("initial curves differ in control point count or degree");
    }
  }
  if (n_ctrl < 3) throw InputError("curves need at least one interior control point");

  std::mt19937_64 rng(config.seed);
  const std::size_t genes = 3 * (n_ctrl - 2);
  Variation variation(config, genes, rng);

  auto evaluate_all = [&](std::vector<Individual>& pop, std::size_t from) {
    parallel_for(pop.size() - from, [&](std::size_t i) {
      auto& ind = pop[from + i];
      ind.objectives = evaluate_individual(ind, start, goal, objectives,
                                           config.waypoint_resolution, config.degree);
    });
  };
  auto record = [&](const std::vector<Individual>& pop, std::size_t from, std::size_t gen) {
    if (!trace) return;
    for (std::size_t i = from; i < pop.size(); ++i) trace->archive.offer(pop[i].objectives);
    if (trace->hypervolume_reference) {
      trace->archive_hypervolume.push_back(
          hypervolume(trace->archive.members(), *trace->hypervolume_reference));
    }
    if (trace->on_generation) trace->on_generation(gen, pop);
  };

  std::vector<Individual> population;
  for (const auto& c : initial) {
    Individual ind = individual_of(c);
    variation.clamp(ind);
    population.push_back(std::move(ind));
  }
  for (std::size_t i = 0; population.size() < config.population; ++i) {
    Individual clone = population[i % initial.size()];
    variation.mutate(clone);
    population.push_back(std::move(clone));
  }
  evaluate_all(population, 0);
  population = select_survivors(std::move(population), config.population);
  record(population, 0, 0);

  std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    const Ranking r = rank_population(population);
    auto tournament = [&]() -> const Individual& {
      const std::size_t a = pick(rng), b = pick(rng);
      if (r.rank[a] != r.rank[b]) return population[r.rank[a] < r.rank[b] ? a : b];
      return population[r.crowding[b] > r.crowding[a] ? b : a];
    };
    std::vector<Individual> pool = population;
    const std::size_t parents = pool.size();
    while (pool.size() < parents + config.population) {
      Individual a = tournament();
      Individual b = tournament();
      variation.crossover(a, b);
      variation.mutate(a);
      variation.mutate(b);
      pool.push_back(std::move(a));
      if (pool.size() < parents + config.population) pool.push_back(std::move(b));
    }
    evaluate_all(pool, parents);
    if (trace) {
      for (std::size_t i = parents; i < pool.size(); ++i) trace->archive.offer(pool[i].objectives);
    }
    population = select_survivors(std::move(pool), config.population);
    if (trace) {
      if (trace->hypervolume_reference) {
        trace->archive_hypervolume.push_back(
            hypervolume(trace->archive.members(), *trace->hypervolume_reference));
      }
      if (trace->on_generation) trace->on_generation(gen, population);
    }
    pick = std::uniform_int_distribution<std::size_t>(0, population.size() - 1);
  }

  const Ranking final_rank = rank_population(population);
  ParetoSet set;
  set.start = start;
  set.goal = goal;
  set.degree = config.degree;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (final_rank.rank[i] != 0) continue;
    const bool duplicate = std::any_of(set.members.begin(), set.members.end(), [&](const Individual& m) {
      return m.genome == population[i].genome;
    });
    if (duplicate) continue;
    set.members.push_back(population[i]);
    set.ranks.push_back(0);
    set.crowding.push_back(final_rank.crowding[i]);
  }
  return set;
}

namespace {

ScalarGrid3D aggregate(const std::vector<GridObjective>& grids, const std::vector<double>& w) {
  const GridSpec3D& spec = grids.front().grid->spec();
  ScalarGrid3D out(spec, 0.0);
  for (std::size_t e = 0; e < grids.size(); ++e) {
    if (w[e] == 0.0) continue;
    const auto& v = grids[e].grid->values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double range = *hi - *lo;
    for (std::size_t n = 0; n < v.size(); ++n) {
      out.values()[n] += range > 0.0 ? w[e] * (v[n] - *lo) / range : 0.0;
    }
  }
  return out;
}

}  // namespace

RouteResult plan_routes(Vec3 start, Vec3 goal, const std::vector<GridObjective>& grids,
                        const std::vector<ObjectiveEvaluator>& objectives,
                        const RouteConfig& config, EvolveTrace* trace) {
  if (grids.empty()) throw InputError("routing needs at least one grid objective");
  const GridSpec3D& spec = grids.front().grid->spec();
  for (const auto& g : grids) {
    if (!(g.grid->spec() == spec)) throw InputError("grid objectives use different grids");
  }
  if (!spec.contains(start)) throw InputError("start lies outside the navigation grid");
  if (!spec.contains(goal)) throw InputError("goal lies outside the navigation grid");
  if (start == goal) throw InputError("start and goal coincide");
  const GridNode s = nearest_node(spec, start);
  const GridNode t = nearest_node(spec, goal);
  if (s == t) throw InputError("start and goal fall on the same grid node");

  const std::size_t n_weights = grids.size() == 1 ? 1 : config.weighted_solutions;
  RouteResult result;
  std::size_t common = 0;
  for (const auto& w : generate_weight_vectors(n_weights, grids.size())) {
    SeedPath seed;
    seed.weights = w;
    seed.polypath = dijkstra_grid(aggregate(grids, w), s, t);
    Waypoints pts = seed.polypath.points;
    pts.front() = start;
    pts.back() = goal;
    if (pts.size() == 2) pts.insert(pts.begin() + 1, 0.5 * (start + goal));
    seed.smoothed = smooth_polypath(pts);
    seed.approximation = nurbs::approximate_nurbs(seed.smoothed, config.approximation_epsilon,
                                                  config.evolve.degree);
    common = std::max(common, seed.approximation.curve.control_points.size());
    result.seeds.push_back(std::move(seed));
  }
  // The genome length is shared, so every seed is refit at the largest n_P.
  for (const auto& seed : result.seeds) {
    Waypoints pts = seed.smoothed;
    if (pts.size() < common) {
      pts = objectives::resample_polyline(
          pts, objectives::path_length(pts) / static_cast<double>(common));
    }
    nurbs::NurbsCurve curve = pts.size() == seed.smoothed.size() &&
                                      seed.approximation.curve.control_points.size() == common
                                  ? seed.approximation.curve
                                  : nurbs::fit_nurbs(pts, common, config.evolve.degree);
    for (std::size_t i = 1; i + 1 < curve.control_points.size(); ++i) {
      curve.control_points[i] = config.evolve.bounds.clamp(curve.control_points[i]);
    }
    curve.control_points.front() = start;
    curve.control_points.back() = goal;
    result.initial.push_back(std::move(curve));
  }
  result.pareto = evolve(result.initial, objectives, config.evolve, trace);
  return result;
}

}  // namespace aerolex::router
