#include <doctest.h>

#include <random>

#include "aerolex/errors.hpp"
#include "aerolex/nurbs.hpp"

using namespace aerolex;
using namespace aerolex::nurbs;

namespace {

Waypoints wiggle(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0, 8);
  Waypoints w;
  Vec3 p{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    w.push_back(p);
    p = p + Vec3{10 + d(rng), d(rng), 0.5 * d(rng)};
  }
  return w;
}

}  // namespace

TEST_CASE("chordal parameters") {
  const auto u = chordal_parameters({{0, 0, 0}, {1, 0, 0}, {4, 0, 0}});
  CHECK(u == std::vector<double>{0.0, 0.25, 1.0});
  CHECK_THROWS_AS(chordal_parameters({{1, 1, 1}, {1, 1, 1}}), InputError);
}

TEST_CASE("knot vectors are clamped and non-decreasing") {
  std::mt19937_64 rng(1);
  const auto u = chordal_parameters(wiggle(rng, 12));
  for (std::size_t n = 3; n <= 12; ++n) {
    const auto k = fit_knots(u, n, 2);
    REQUIRE(k.size() == n + 3);
    CHECK(k[0] == 0.0);
    CHECK(k[2] == 0.0);
    CHECK(k[n] == 1.0);
    CHECK(k[n + 2] == 1.0);
    for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] >= k[i - 1]);
  }
}

TEST_CASE("collinear points need four control points") {
  Waypoints pts;
  for (int i = 0; i <= 10; ++i) pts.push_back({10.0 * i, 5.0 * i, 2.0 * i});
  const auto a = approximate_nurbs(pts, 0.5);
  CHECK(a.curve.control_points.size() == 4);
  CHECK(a.max_deviation < 1e-9);
}

TEST_CASE("approximation meets epsilon and keeps the ends") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = wiggle(rng, 30);
    const auto a = approximate_nurbs(pts, 5.0);
    CHECK(a.max_deviation <= 5.0);
    CHECK(a.curve.control_points.size() <= pts.size());
    CHECK(a.curve.evaluate(a.curve.u_min()) == pts.front());
    CHECK(a.curve.evaluate(a.curve.u_max()) == pts.back());
    CHECK(a.curve.control_points.front() == pts.front());
    CHECK(a.curve.control_points.back() == pts.back());
  }
}

TEST_CASE("a smaller epsilon never needs fewer control points") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = wiggle(rng, 25);
    std::size_t previous = 0;
    for (double eps : {40.0, 20.0, 10.0, 5.0, 2.0, 1.0}) {
      const auto n = approximate_nurbs(pts, eps).curve.control_points.size();
      CHECK(n >= previous);
      previous = n;
    }
  }
}

TEST_CASE("fitting with as many control points as points interpolates") {
  std::mt19937_64 rng(8);
  const auto pts = wiggle(rng, 9);
  const auto c = fit_nurbs(pts, pts.size());
  CHECK(max_deviation(c, pts, chordal_parameters(pts)) < 1e-6);
}

TEST_CASE("curve validation") {
  NurbsCurve c;
  c.knots = {0, 0, 0, 1, 1};
  c.control_points = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(c.check(), InputError);
  c.knots = {0, 0, 0, 1, 1, 1};
  CHECK_NOTHROW(c.check());
  c.knots = {0, 0, 0.5, 0.4, 1, 1};
  CHECK_THROWS_AS(c.check(), InputError);
}
