#include "aerolex/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aerolex/errors.hpp"

namespace aerolex::router {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

std::vector<int> non_dominated_sort(const std::vector<ObjectiveVector>& vectors) {
  const std::size_t n = vectors.size();
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) {
      throw InputError("objective vectors differ in dimension");
    }
  }
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dominators(n, 0);
  std::vector<int> rank(n, -1);
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(vectors[p], vectors[q])) {
        dominated[p].push_back(q);
      } else if (dominates(vectors[q], vectors[p])) {
        ++dominators[p];
      }
    }
    if (dominators[p] == 0) {
      rank[p] = 0;
      current.push_back(p);
    }
  }
  int front = 0;
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated[p]) {
        if (--dominators[q] == 0) {
          rank[q] = front + 1;
          next.push_back(q);
        }
      }
    }
    ++front;
    current = std::move(next);
  }
  return rank;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
  const std::size_t n = front.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  if (n <= 2) return std::vector<double>(n, inf);
  const std::size_t dims = front.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < dims; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][m] < front[b][m]; });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = front[order.back()][m] - front[order.front()][m];
    if (!(range > 0.0) || !std::isfinite(range)) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (std::isinf(dist[order[i]])) continue;
      dist[order[i]] += (front[order[i + 1]][m] - front[order[i - 1]][m]) / range;
    }
  }
  return dist;
}

namespace {

void check_front(const std::vector<ObjectiveVector>& front) {
  if (front.empty()) throw InputError("empty Pareto front");
}

}  // namespace

std::size_t knee_point(const std::vector<ObjectiveVector>& front) {
  check_front(front);
  const std::size_t dims = front.front().size();
  std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
  for (const auto& v : front) {
    for (std::size_t m = 0; m < dims; ++m) {
      lo[m] = std::min(lo[m], v[m]);
      hi[m] = std::max(hi[m], v[m]);
    }
  }
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < front.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t m = 0; m < dims; ++m) {
      const double range = hi[m] - lo[m];
      const double x = range > 0.0 && std::isfinite(range) ? (front[i][m] - lo[m]) / range : 0.0;
      d2 += x * x;
    }
    if (d2 < best_dist) {
      best_dist = d2;
      best = i;
    }
  }
  return best;
}

std::vector<std::size_t> extreme_points(const std::vector<ObjectiveVector>& front) {
  check_front(front);
  std::vector<std::size_t> out(front.front().size(), 0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    for (std::size_t i = 1; i < front.size(); ++i) {
      if (front[i][m] < front[out[m]][m]) out[m] = i;
    }
  }
  return out;
}

namespace {

// Slicing along the last objective; exact for any dimension.
double hv_recursive(std::vector<ObjectiveVector> pts, const ObjectiveVector& ref, std::size_t dims) {
  if (pts.empty()) return 0.0;
  if (dims == 1) {
    double best = ref[0];
    for (const auto& p : pts) best = std::min(best, p[0]);
    return ref[0] - best;
  }
  const std::size_t last = dims - 1;
  std::sort(pts.begin(), pts.end(),
            [&](const ObjectiveVector& a, const ObjectiveVector& b) { return a[last] < b[last]; });
  double volume = 0.0;
  std::vector<ObjectiveVector> slab;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    slab.push_back(pts[i]);
    const double top = i + 1 < pts.size() ? pts[i + 1][last] : ref[last];
    const double height = top - pts[i][last];
    if (height > 0.0) volume += height * hv_recursive(slab, ref, dims - 1);
  }
  return volume;
}

}  // namespace

double hypervolume(const std::vector<ObjectiveVector>& points, const ObjectiveVector& reference) {
  std::vector<ObjectiveVector> kept;
  for (const auto& p : points) {
    bool inside = p.size() == reference.size();
    for (std::size_t m = 0; inside && m < p.size(); ++m) inside = p[m] < reference[m];
    if (inside) kept.push_back(p);
  }
  // Dominated points add nothing; dropping them keeps the recursion small.
  std::vector<ObjectiveVector> front;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < kept.size() && !dominated; ++j) {
      dominated = j != i && (dominates(kept[j], kept[i]) || (j < i && kept[j] == kept[i]));
    }
    if (!dominated) front.push_back(kept[i]);
  }
  return hv_recursive(std::move(front), reference, reference.size());
}

bool ParetoArchive::offer(const ObjectiveVector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  for (const auto& m : members_) {
    if (dominates(m, v) || m == v) return false;
  }
  std::erase_if(members_, [&](const ObjectiveVector& m) { return dominates(v, m); });
  members_.push_back(v);
  return true;
}

}  // namespace aerolex::router
