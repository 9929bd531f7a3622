#pragma once

#include <cstddef>
#include <vector>

namespace aerolex::router {

using ObjectiveVector = std::vector<double>;

/// a <= b everywhere and a < b somewhere (minimization).
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Front rank per vector (0 = non-dominated), by fast non-dominated sorting.
std::vector<int> non_dominated_sort(const std::vector<ObjectiveVector>& vectors);

/// NSGA-II crowding distance within one front. Per-objective boundary members
/// get +inf; interior members sum neighbour gaps normalized by the range.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front);

/// Member closest to the ideal point after per-objective min-max
/// normalization; ties go to the lowest index.
std::size_t knee_point(const std::vector<ObjectiveVector>& front);

/// Per objective, the member with the smallest value (lowest index on ties).
std::vector<std::size_t> extreme_points(const std::vector<ObjectiveVector>& front);

/// Volume dominated by `points` and bounded by `reference` (minimization).
/// Points not strictly better than the reference in every objective add nothing.
double hypervolume(const std::vector<ObjectiveVector>& points, const ObjectiveVector& reference);

/// Non-dominated archive of every finite objective vector offered to it.
class ParetoArchive {
 public:
  /// Returns true if the vector entered the archive.
  bool offer(const ObjectiveVector& v);
  const std::vector<ObjectiveVector>& members() const { return members_; }

 private:
  std::vector<ObjectiveVector> members_;
};

}  // namespace aerolex::router
