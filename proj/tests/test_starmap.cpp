#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "aerolex/errors.hpp"
#include "aerolex/starmap.hpp"
#include "support.hpp"

using namespace aerolex;
using namespace aerolex::starmap;
using geo::FeatureMap;
using geo::GeoFeature;
using geo::GeometryKind;

namespace {

GeoFeature square(const std::string& id, double x0, double y0, double side,
                  std::set<std::string> tags) {
  return {id,
          GeometryKind::polygon,
          {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}, {x0, y0}},
          std::move(tags)};
}

FeatureMap sample_map() {
  return FeatureMap({48.0, 2.0}, {0, 200, 0, 200, 0, 100},
                    {square("park", 50, 50, 40, {"park"}),
                     GeoFeature{"tower", GeometryKind::point, {{150, 150}}, {"tower"}},
                     GeoFeature{"road", GeometryKind::polyline, {{0, 10}, {200, 10}}, {"primary"}}});
}

PerturbationModel noiseless() {
  PerturbationModel m;
  m.translation_sigma = 0.0;
  m.sample_count = 2;
  return m;
}

}  // namespace

TEST_CASE("zero sigmas leave the map unchanged") {
  const auto map = sample_map();
  const auto out = sample_perturbed_map(map, noiseless(), 42);
  REQUIRE(out.features().size() == map.features().size());
  for (std::size_t i = 0; i < map.features().size(); ++i) {
    CHECK(out.features()[i].vertices == map.features()[i].vertices);
  }
}

TEST_CASE("same seed gives the same perturbed map") {
  const auto map = sample_map();
  PerturbationModel m;
  m.rotation_sigma = 0.1;
  const auto a = sample_perturbed_map(map, m, 5);
  const auto b = sample_perturbed_map(map, m, 5);
  const auto c = sample_perturbed_map(map, m, 6);
  for (std::size_t i = 0; i < map.features().size(); ++i) {
    CHECK(a.features()[i].vertices == b.features()[i].vertices);
  }
  CHECK(a.features()[0].vertices != c.features()[0].vertices);
}

TEST_CASE("translation noise has the configured moments") {
  const FeatureMap map({0, 0}, {-100, 100, -100, 100, 0, 10},
                       {GeoFeature{"p", GeometryKind::point, {{0, 0}}, {"tower"}}});
  PerturbationModel m;
  m.translation_sigma = 3.0;
  const int n = 10000;
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2 p = sample_perturbed_map(map, m, sample_seed(11, i)).features()[0].vertices[0];
    sx += p.x;
    sy += p.y;
    sxx += p.x * p.x;
    syy += p.y * p.y;
  }
  const double mx = sx / n, my = sy / n;
  CHECK(std::abs(mx) < 0.1);
  CHECK(std::abs(my) < 0.1);
  const double sdx = std::sqrt((sxx - n * mx * mx) / (n - 1));
  const double sdy = std::sqrt((syy - n * my * my) / (n - 1));
  CHECK(sdx == doctest::Approx(3.0).epsilon(0.05));
  CHECK(sdy == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("rotation keeps the centroid") {
  const FeatureMap map({0, 0}, {0, 100, 0, 100, 0, 10}, {square("a", 10, 10, 20, {"park"})});
  PerturbationModel m;
  m.translation_sigma = 0.0;
  m.rotation_sigma = 0.5;
  const auto out = sample_perturbed_map(map, m, 3);
  const Vec2 c = out.features()[0].centroid();
  CHECK(c.x == doctest::Approx(20.0));
  CHECK(c.y == doctest::Approx(20.0));
  CHECK(out.features()[0].vertices[0] != map.features()[0].vertices[0]);
}

TEST_CASE("eval_over") {
  const auto map = sample_map();
  CHECK(eval_over({70, 70}, "park", map));
  CHECK_FALSE(eval_over({10070, 70}, "park", map));
  CHECK(eval_over({50, 70}, "park", map));
  CHECK(eval_over({50, 50}, "park", map));
  CHECK_FALSE(eval_over({70, 70}, "hospital", map));
}

TEST_CASE("eval_distance") {
  const auto map = sample_map();
  CHECK(eval_distance({250, 150}, "tower", map) == doctest::Approx(100.0));
  CHECK(eval_distance({60, 60}, "park", map) == 0.0);
  CHECK(eval_distance({70, 30}, "park", map) == doctest::Approx(20.0));
  const FeatureMap two({0, 0}, {0, 100, 0, 100, 0, 10},
                       {GeoFeature{"a", GeometryKind::point, {{0, 0}}, {"tower"}},
                        GeoFeature{"b", GeometryKind::point, {{10, 0}}, {"tower"}}});
  CHECK(eval_distance({5, 5}, "tower", two) == doctest::Approx(std::sqrt(50.0)));
  CHECK_THROWS_WITH_AS(eval_distance({0, 0}, "embassy", map), doctest::Contains("no features"),
                       InputError);
}

TEST_CASE("noiseless layers are exact") {
  const auto map = sample_map();
  const GridSpec2D grid{0, 0, 10, 10, 21, 21};
  const auto over = fit_relation_layer(map, noiseless(), RelationKind::over, "park", grid, 1);
  CHECK(over.value[grid.index(7, 7)] == 1.0);
  CHECK(over.value[grid.index(0, 0)] == 0.0);
  const auto dist = fit_relation_layer(map, noiseless(), RelationKind::distance, "tower", grid, 1);
  CHECK(dist.value[grid.index(15, 5)] == doctest::Approx(100.0));
  CHECK(dist.spread[grid.index(15, 5)] == 0.0);
  const auto i = grid.index(15, 5);
  const auto params = interpolate_layer(dist, grid.node(i));
  CHECK(params.value == dist.value[i]);
  CHECK(params.spread == 0.0);
}

TEST_CASE("a node on a straight edge is covered half the time") {
  const FeatureMap map({0, 0}, {-1000, 1000, -1000, 1000, 0, 10},
                       {square("half", 0, -500, 1000, {"park"})});
  PerturbationModel m;
  m.translation_sigma = 3.0;
  m.sample_count = 10000;
  const GridSpec2D grid{0, 0, 1, 1, 2, 2};
  const auto layer = fit_relation_layer(map, m, RelationKind::over, "park", grid, 17);
  CHECK(layer.value[grid.index(0, 0)] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("coverage inside a polygon shrinks as noise grows") {
  const FeatureMap map({0, 0}, {-100, 100, -100, 100, 0, 10}, {square("a", -5, -5, 10, {"park"})});
  const GridSpec2D grid{2, 0, 1, 1, 2, 2};
  double previous = 1.0;
  for (double sigma : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    PerturbationModel m;
    m.translation_sigma = sigma;
    m.sample_count = 10000;
    const double p = fit_relation_layer(map, m, RelationKind::over, "park", grid, 23).value[0];
    CHECK(p <= previous + 0.02);
    previous = p;
  }
}

TEST_CASE("layer parameters stay in their domains") {
  const auto map = sample_map();
  PerturbationModel m;
  m.rotation_sigma = 0.05;
  const GridSpec2D grid{0, 0, 20, 20, 11, 11};
  const auto sm = build_star_map(map, m, {{RelationKind::over, "park"}, {RelationKind::distance, "primary"}},
                                 grid, 3);
  for (double p : sm.layer(RelationKind::over, "park").value) CHECK((p >= 0.0 && p <= 1.0));
  const auto& d = sm.layer(RelationKind::distance, "primary");
  for (std::size_t i = 0; i < d.value.size(); ++i) {
    CHECK(d.value[i] >= 0.0);
    CHECK(d.spread[i] >= 0.0);
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 200);
  for (int i = 0; i < 100; ++i) {
    const auto p = interpolate_layer(sm.layer(RelationKind::over, "park"), {u(rng), u(rng)});
    CHECK((p.value >= 0.0 && p.value <= 1.0));
  }
}

TEST_CASE("interpolation between nodes") {
  GridSpec2D grid{0, 0, 10, 10, 2, 2};
  RelationLayer layer{RelationKind::over, "park", grid, {0, 1, 0, 1}, {}};
  CHECK(interpolate_layer(layer, {5, 0}).value == doctest::Approx(0.5));
  layer.value = {0, 0, 1, 1};
  CHECK(interpolate_layer(layer, {5, 5}).value == doctest::Approx(0.5));
  CHECK_THROWS_AS(interpolate_layer(layer, {11, 5}), InputError);
}

TEST_CASE("star maps are deterministic and round trip through disk") {
  const auto map = sample_map();
  PerturbationModel m;
  m.sample_count = 20;
  m.overrides["park"] = {0.1, 5.0};
  const GridSpec2D grid{0, 0, 20, 20, 11, 11};
  const std::vector<LayerKey> rel{{RelationKind::over, "park"}, {RelationKind::distance, "tower"}};
  const auto a = build_star_map(map, m, rel, grid, 9, "sample");
  const auto b = build_star_map(map, m, rel, grid, 9, "sample");
  CHECK(a.layer(RelationKind::over, "park").value == b.layer(RelationKind::over, "park").value);
  CHECK(a.layer(RelationKind::distance, "tower").spread ==
        b.layer(RelationKind::distance, "tower").spread);

  const auto dir = fixture::scratch("starmap_io");
  save_star_map(a, dir);
  const auto back = load_star_map(dir);
  CHECK(back.grid() == a.grid());
  CHECK(back.seed() == 9);
  CHECK(back.source() == "sample");
  CHECK(back.model().overrides.at("park").translation == 5.0);
  CHECK(back.layer(RelationKind::over, "park").value == a.layer(RelationKind::over, "park").value);
  CHECK(back.layer(RelationKind::distance, "tower").spread ==
        a.layer(RelationKind::distance, "tower").spread);
  CHECK_THROWS_AS(back.layer(RelationKind::over, "embassy"), InputError);
  CHECK_THROWS_AS(load_star_map(dir + "/missing"), InputError);
}

TEST_CASE("perturbation model validation") {
  PerturbationModel m;
  m.sample_count = 1;
  CHECK_THROWS_AS(m.check(), InputError);
  m.sample_count = 2;
  m.translation_sigma = -1;
  CHECK_THROWS_AS(m.check(), InputError);
}
