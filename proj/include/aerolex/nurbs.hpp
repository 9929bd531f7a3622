#pragma once

#include <cstddef>
#include <vector>

#include "aerolex/vec.hpp"

namespace aerolex::nurbs {

/// Clamped NURBS curve with unit weights (a B-spline), defined on
/// [knots[degree], knots[n_P]].
struct NurbsCurve {
  int degree = 2;
  std::vector<double> knots;  // n_P + degree + 1 entries
  std::vector<Vec3> control_points;

  double u_min() const { return knots[degree]; }
  double u_max() const { return knots[control_points.size()]; }

  /// de Boor evaluation; the ends return the end control points exactly.
  Vec3 evaluate(double u) const;

  /// Throws InputError on inconsistent sizes, unclamped or decreasing knots.
  void check() const;
};

/// Cumulative chord lengths normalized to [0, 1]. Zero-length inputs throw.
std::vector<double> chordal_parameters(const Waypoints& points);

/// Clamped knot vector for a least-squares fit of `params` with
/// `control_count` control points. Uses knot averaging when the fit is an
/// interpolation.
std::vector<double> fit_knots(const std::vector<double>& params, std::size_t control_count,
                              int degree);

/// Least-squares fit with the end points interpolated exactly.
NurbsCurve fit_nurbs(const Waypoints& points, std::size_t control_count, int degree = 2);

/// Largest distance between points[k] and curve(params[k]).
double max_deviation(const NurbsCurve& curve, const Waypoints& points,
                     const std::vector<double>& params);

struct NurbsApproximation {
  NurbsCurve curve;
  double max_deviation = 0.0;
};

/// Adds control points, starting at four, until the deviation at the chordal
/// parameters is at most `epsilon`. Ends at an interpolation (n_P = |points|).
NurbsApproximation approximate_nurbs(const Waypoints& points, double epsilon, int degree = 2);

}  // namespace aerolex::nurbs
