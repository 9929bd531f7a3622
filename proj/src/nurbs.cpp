#include "aerolex/nurbs.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "aerolex/errors.hpp"

namespace aerolex::nurbs {

namespace {

std::size_t find_span(const NurbsCurve& c, double u) {
  const std::size_t n = c.control_points.size() - 1;
  const std::size_t p = static_cast<std::size_t>(c.degree);
  if (u >= c.knots[n + 1]) return n;
  if (u <= c.knots[p]) return p;
  const auto it = std::upper_bound(c.knots.begin() + p, c.knots.begin() + n + 1, u);
  return static_cast<std::size_t>(it - c.knots.begin()) - 1;
}

// Non-zero basis functions N_{span-p..span, p}(u).
void basis_functions(const std::vector<double>& knots, std::size_t span, double u, int degree,
                     std::vector<double>& out) {
  const std::size_t p = static_cast<std::size_t>(degree);
  out.assign(p + 1, 0.0);
  std::vector<double> left(p + 1), right(p + 1);
  out[0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    left[j] = u - knots[span + 1 - j];
    right[j] = knots[span + j] - u;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = denom == 0.0 ? 0.0 : out[r] / denom;
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

}  // namespace

Vec3 NurbsCurve::evaluate(double u) const {
  if (u <= u_min()) return control_points.front();
  if (u >= u_max()) return control_points.back();
  const std::size_t span = find_span(*this, u);
  std::vector<double> basis;
  basis_functions(knots, span, u, degree, basis);
  Vec3 out{};
  const std::size_t p = static_cast<std::size_t>(degree);
  for (std::size_t i = 0; i <= p; ++i) out = out + basis[i] * control_points[span - p + i];
  return out;
}

void NurbsCurve::check() const {
  if (degree < 1) throw InputError("NURBS degree must be at least 1");
  const std::size_t p = static_cast<std::size_t>(degree);
  if (control_points.size() < p + 1) throw InputError("too few control points for the degree");
  if (knots.size() != control_points.size() + p + 1) throw InputError("knot vector size mismatch");
  if (!std::is_sorted(knots.begin(), knots.end())) throw InputError("knots must be non-decreasing");
  for (std::size_t i = 0; i <= p; ++i) {
    if (knots[i] != knots.front() || knots[knots.size() - 1 - i] != knots.back()) {
      throw InputError("knot vector is not clamped");
    }
  }
  if (!(knots.back() > knots.front())) throw InputError("knot vector has an empty domain");
}

std::vector<double> chordal_parameters(const Waypoints& points) {
  if (points.size() < 2) throw InputError("need at least two points");
  std::vector<double> params(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    params[i] = params[i - 1] + distance(points[i - 1], points[i]);
  }
  const double total = params.back();
  if (!(total > 0.0)) throw InputError("degenerate (zero-length) point sequence");
  for (auto& t : params) t /= total;
  params.back() = 1.0;
  return params;
}

std::vector<double> fit_knots(const std::vector<double>& params, std::size_t control_count,
                              int degree) {
  const std::size_t p = static_cast<std::size_t>(degree);
  const std::size_t n = control_count - 1;
  const std::size_t m = params.size() - 1;
  std::vector<double> knots(control_count + p + 1, 0.0);
  for (std::size_t i = 0; i <= p; ++i) knots[knots.size() - 1 - i] = 1.0;
  if (n == m) {
    for (std::size_t j = 1; j + p <= n; ++j) {
      double sum = 0.0;
      for (std::size_t i = j; i < j + p; ++i) sum += params[i];
      knots[j + p] = sum / static_cast<double>(p);
    }
  } else {
    const double d = static_cast<double>(m + 1) / static_cast<double>(n - p + 1);
    for (std::size_t j = 1; j + p <= n; ++j) {
      const double jd = static_cast<double>(j) * d;
      const std::size_t i = static_cast<std::size_t>(jd);
      const double alpha = jd - static_cast<double>(i);
      knots[j + p] = (1.0 - alpha) * params[i - 1] + alpha * params[i];
    }
  }
  return knots;
}

NurbsCurve fit_nurbs(const Waypoints& points, std::size_t control_count, int degree) {
  const std::size_t p = static_cast<std::size_t>(degree);
  if (control_count < p + 1) throw InputError("need at least degree + 1 control points");
  if (control_count > points.size()) throw InputError("more control points than data points");
  const auto params = chordal_parameters(points);

  NurbsCurve curve;
  curve.degree = degree;
  curve.knots = fit_knots(params, control_count, degree);
  curve.control_points.assign(control_count, Vec3{});
  curve.control_points.front() = points.front();
  curve.control_points.back() = points.back();
  const std::size_t n = control_count - 1;
  const std::size_t m = points.size() - 1;
  if (n < 2 || m < 2) {
    if (n >= 2) {
      throw InputError("cannot fit interior control points to two data points");
    }
    return curve;
  }

  // Unknowns: interior control points P_1..P_{n-1}; rows: interior data Q_1..Q_{m-1}.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m - 1),
                                                static_cast<Eigen::Index>(n - 1));
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(m - 1), 3);
  std::vector<double> funcs;
  for (std::size_t k = 1; k < m; ++k) {
    const std::size_t span = find_span(curve, params[k]);
    basis_functions(curve.knots, span, params[k], degree, funcs);
    Vec3 r = points[k];
    for (std::size_t t = 0; t <= p; ++t) {
      const std::size_t i = span - p + t;
      if (i == 0) {
        r = r - funcs[t] * points.front();
      } else if (i == n) {
        r = r - funcs[t] * points.back();
      } else {
        basis(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(i - 1)) = funcs[t];
      }
    }
    rhs.row(static_cast<Eigen::Index>(k - 1)) << r.x, r.y, r.z;
  }
  const Eigen::MatrixXd solution = basis.colPivHouseholderQr().solve(rhs);
  for (std::size_t i = 1; i < n; ++i) {
    const auto row = solution.row(static_cast<Eigen::Index>(i - 1));
    curve.control_points[i] = Vec3{row(0), row(1), row(2)};
  }
  return curve;
}

double max_deviation(const NurbsCurve& curve, const Waypoints& points,
                     const std::vector<double>& params) {
  double worst = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    worst = std::max(worst, distance(curve.evaluate(params[k]), points[k]));
  }
  return worst;
}

NurbsApproximation approximate_nurbs(const Waypoints& points, double epsilon, int degree) {
  if (points.size() < 3) throw InputError("NURBS approximation needs at least three points");
  if (!(epsilon > 0.0)) throw InputError("approximation tolerance must be positive");
  const auto params = chordal_parameters(points);
  const std::size_t first = std::min<std::size_t>(
      std::max<std::size_t>(4, static_cast<std::size_t>(degree) + 1), points.size());
  NurbsApproximation best;
  for (std::size_t count = first; count <= points.size(); ++count) {
    best.curve = fit_nurbs(points, count, degree);
    best.max_deviation = max_deviation(best.curve, points, params);
    if (best.max_deviation <= epsilon) break;
  }
  return best;
}

}  // namespace aerolex::nurbs
