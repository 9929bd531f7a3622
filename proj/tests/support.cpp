#include "support.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <boost/math/distributions/normal.hpp>

namespace oracle {

using namespace aerolex;
using inference::GroundFormula;
using inference::GroundProgram;
using inference::NodeKind;

double normal_cdf(double x, double mean, double stddev) {
  return boost::math::cdf(boost::math::normal_distribution<double>(mean, stddev), x);
}

namespace {

bool eval(const GroundFormula& f, const std::vector<int>& values, std::size_t n_facts,
          const std::vector<char>& defs) {
  switch (f.kind) {
    case NodeKind::constant:
      return f.value;
    case NodeKind::fact:
      return values[f.index] == 1;
    case NodeKind::interval:
      return f.accepted[static_cast<std::size_t>(values[n_facts + f.index])];
    case NodeKind::defined:
      return defs[f.index] != 0;
    case NodeKind::negation:
      return !eval(f.children[0], values, n_facts, defs);
    case NodeKind::conjunction:
      for (const auto& c : f.children) {
        if (!eval(c, values, n_facts, defs)) return false;
      }
      return true;
    case NodeKind::disjunction:
      for (const auto& c : f.children) {
        if (eval(c, values, n_facts, defs)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

double brute_force_wmc(const GroundProgram& gp) {
  std::vector<int> radix;
  for (std::size_t i = 0; i < gp.facts.size(); ++i) radix.push_back(2);
  for (const auto& v : gp.intervals) radix.push_back(static_cast<int>(v.masses.size()));
  std::vector<int> values(radix.size(), 0);
  double total = 0.0;
  for (;;) {
    std::vector<char> defs(gp.definitions.size(), 0);
    for (std::size_t d = 0; d < gp.definitions.size(); ++d) {
      defs[d] = eval(gp.definitions[d].formula, values, gp.facts.size(), defs) ? 1 : 0;
    }
    if (defs[gp.query]) {
      double w = 1.0;
      for (std::size_t i = 0; i < gp.facts.size(); ++i) {
        w *= values[i] ? gp.facts[i].probability : 1.0 - gp.facts[i].probability;
      }
      for (std::size_t i = 0; i < gp.intervals.size(); ++i) {
        w *= gp.intervals[i].masses[static_cast<std::size_t>(values[gp.facts.size() + i])];
      }
      total += w;
    }
    std::size_t k = 0;
    for (; k < radix.size(); ++k) {
      if (++values[k] < radix[k]) break;
      values[k] = 0;
    }
    if (k == radix.size()) break;
  }
  return total;
}

GroundProgram random_program(std::mt19937_64& rng, std::size_t facts, std::size_t max_defs,
                             bool with_interval) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GroundProgram gp;
  for (std::size_t i = 0; i < facts; ++i) {
    gp.facts.push_back({"f" + std::to_string(i), unit(rng)});
  }
  if (with_interval) {
    const double mean = 100.0 * unit(rng), sd = 1.0 + 50.0 * unit(rng);
    std::vector<double> cuts = {100.0 * unit(rng), 100.0 * unit(rng)};
    std::sort(cuts.begin(), cuts.end());
    if (cuts[1] - cuts[0] < 1e-6) cuts.pop_back();
    inference::IntervalVariable v{"x", cuts, {}};
    double prev = 0.0;
    for (double c : cuts) {
      const double cdf = normal_cdf(c, mean, sd);
      v.masses.push_back(cdf - prev);
      prev = cdf;
    }
    v.masses.push_back(1.0 - prev);
    gp.intervals.push_back(v);
  }
  std::uniform_int_distribution<std::size_t> defs_count(1, max_defs);
  const std::size_t n_defs = defs_count(rng);
  std::function<GroundFormula(std::size_t, int)> make = [&](std::size_t def, int depth) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, 9)(rng);
    if (depth >= 2 || pick < 4) {
      const std::size_t leaf = std::uniform_int_distribution<std::size_t>(0, 9)(rng);
      if (leaf == 0) return GroundFormula::constant(unit(rng) < 0.5);
      if (leaf <= 2 && def > 0) {
        return GroundFormula::defined(std::uniform_int_distribution<std::size_t>(0, def - 1)(rng));
      }
      if (leaf == 3 && !gp.intervals.empty()) {
        std::vector<bool> accepted;
        for (std::size_t k = 0; k < gp.intervals[0].masses.size(); ++k) {
          accepted.push_back(unit(rng) < 0.5);
        }
        return GroundFormula::interval(0, accepted);
      }
      if (gp.facts.empty()) return GroundFormula::constant(true);
      return GroundFormula::fact(
          std::uniform_int_distribution<std::size_t>(0, gp.facts.size() - 1)(rng));
    }
    if (pick == 4) return GroundFormula::negation(make(def, depth + 1));
    std::vector<GroundFormula> children;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    for (std::size_t i = 0; i < n; ++i) children.push_back(make(def, depth + 1));
    return pick < 7 ? GroundFormula::conjunction(children) : GroundFormula::disjunction(children);
  };
  for (std::size_t d = 0; d < n_defs; ++d) {
    gp.definitions.push_back({"d" + std::to_string(d), make(d, 0)});
  }
  gp.query = gp.definitions.size() - 1;
  return gp;
}

bool adjacent(const GridSpec3D& s, std::size_t u, std::size_t v) {
  if (u == v) return false;
  auto coords = [&](std::size_t n) {
    return std::array<long, 3>{static_cast<long>(n % s.nx), static_cast<long>((n / s.nx) % s.ny),
                               static_cast<long>(n / (s.nx * s.ny))};
  };
  const auto a = coords(u), b = coords(v);
  for (int d = 0; d < 3; ++d) {
    if (std::abs(a[d] - b[d]) > 1) return false;
  }
  return true;
}

double edge_cost(const ScalarGrid3D& cost, std::size_t u, std::size_t v) {
  const auto& s = cost.spec();
  const long dx = static_cast<long>(v % s.nx) - static_cast<long>(u % s.nx);
  const long dy = static_cast<long>((v / s.nx) % s.ny) - static_cast<long>((u / s.nx) % s.ny);
  const long dz = static_cast<long>(v / (s.nx * s.ny)) - static_cast<long>(u / (s.nx * s.ny));
  const double len = std::sqrt(std::pow(static_cast<double>(dx) * s.resolution.x, 2) +
                               std::pow(static_cast<double>(dy) * s.resolution.y, 2) +
                               std::pow(static_cast<double>(dz) * s.resolution.z, 2));
  return len * (cost.values()[u] + cost.values()[v]) / 2.0;
}

double min_walk_cost(const ScalarGrid3D& cost, std::size_t start, std::size_t goal) {
  const auto& s = cost.spec();
  const std::size_t n = s.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  dist[start] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (std::isinf(dist[u])) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (!adjacent(s, u, v) || std::isinf(cost.values()[v])) continue;
        const double nd = dist[u] + edge_cost(cost, u, v);
        if (nd < dist[v]) {
          dist[v] = nd;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return dist[goal];
}

double min_simple_path_cost(const ScalarGrid3D& cost, std::size_t start, std::size_t goal) {
  const auto& s = cost.spec();
  // Branch and bound. The relaxation result, with slack, only seeds the bound;
  // the returned value is always the cost of an enumerated path.
  double min_edge = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < s.size(); ++u) {
    for (std::size_t v = u + 1; v < s.size(); ++v) {
      if (adjacent(s, u, v)) min_edge = std::min(min_edge, edge_cost(cost, u, v));
    }
  }
  auto steps_left = [&](std::size_t u) {
    auto ijk = [&](std::size_t n) {
      return std::array<std::size_t, 3>{n % s.nx, (n / s.nx) % s.ny, n / (s.nx * s.ny)};
    };
    const auto a = ijk(u), b = ijk(goal);
    auto gap = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
    return static_cast<double>(std::max({gap(a[0], b[0]), gap(a[1], b[1]), gap(a[2], b[2])}));
  };
  double bound = min_walk_cost(cost, start, goal) * (1.0 + 1e-9);
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> on_path(s.size(), 0);
  std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double acc) {
    if (u == goal) {
      best = std::min(best, acc);
      bound = std::min(bound, acc);
      return;
    }
    on_path[u] = 1;
    for (std::size_t v = 0; v < s.size(); ++v) {
      if (on_path[v] || !adjacent(s, u, v)) continue;
      const double next = acc + edge_cost(cost, u, v);
      if (next + min_edge * steps_left(v) * (1.0 - 1e-9) > bound) continue;
      dfs(v, next);
    }
    on_path[u] = 0;
  };
  dfs(start, 0.0);
  return best;
}

std::vector<int> peel_ranks(const std::vector<std::vector<double>>& v) {
  auto dom = [](const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > b[i]) return false;
      if (a[i] < b[i]) strict = true;
    }
    return strict;
  };
  std::vector<int> rank(v.size(), -1);
  std::size_t assigned = 0;
  for (int r = 0; assigned < v.size(); ++r) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (rank[i] != -1) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < v.size() && !dominated; ++j) {
        dominated = rank[j] == -1 && dom(v[j], v[i]);
      }
      if (!dominated) layer.push_back(i);
    }
    for (std::size_t i : layer) rank[i] = r;
    assigned += layer.size();
  }
  return rank;
}

double inclusion_exclusion_hv(const std::vector<std::vector<double>>& points,
                              const std::vector<double>& ref) {
  const std::size_t n = points.size();
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    double vol = 1.0;
    int count = 0;
    for (std::size_t d = 0; d < ref.size(); ++d) {
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1ULL << i)) worst = std::max(worst, points[i][d]);
      }
      vol *= std::max(0.0, ref[d] - worst);
    }
    for (std::size_t i = 0; i < n; ++i) count += (mask >> i) & 1ULL;
    total += (count % 2 ? 1.0 : -1.0) * vol;
  }
  return total;
}

}  // namespace oracle

namespace fixture {

using namespace aerolex;

starmap::StarMap constant_starmap(const std::vector<LayerSpec>& layers, double extent, double res) {
  GridSpec2D grid;
  grid.rx = grid.ry = res;
  grid.nx = grid.ny = static_cast<std::size_t>(std::floor(extent / res)) + 1;
  starmap::StarMap sm(grid, {}, 0, "fixture");
  for (const auto& l : layers) {
    starmap::RelationLayer layer;
    layer.kind = l.kind;
    layer.tag = l.tag;
    layer.grid = grid;
    layer.value.assign(grid.size(), l.value);
    if (l.kind == starmap::RelationKind::distance) layer.spread.assign(grid.size(), l.spread);
    sm.add_layer(std::move(layer));
  }
  return sm;
}

starmap::RelationLayer step_layer(const GridSpec2D& grid, const std::string& tag, double split) {
  starmap::RelationLayer layer;
  layer.kind = starmap::RelationKind::over;
  layer.tag = tag;
  layer.grid = grid;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    layer.value.push_back(grid.node(n).x < split ? 1.0 : 0.0);
  }
  return layer;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data(const std::string& name) { return std::string(AEROLEX_DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("aerolex_test_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace fixture
