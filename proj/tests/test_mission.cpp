#include <doctest.h>

#include <cmath>
#include <random>

#include "aerolex/cola.hpp"
#include "aerolex/errors.hpp"
#include "aerolex/mission.hpp"
#include "support.hpp"

using namespace aerolex;
using namespace aerolex::mission;
using starmap::RelationKind;

namespace {

const Waypoints kPath{{10, 10, 5}, {30, 40, 10}, {60, 70, 10}};

starmap::StarMap pilot_map() {
  return fixture::constant_starmap({{RelationKind::distance, "pilot", 50.0, 5.0}});
}

}  // namespace

TEST_CASE("clearance score") {
  const auto r = clearance_from_probabilities({1.0, 0.8, 0.6}, 0.75);
  CHECK(r.score == doctest::Approx(0.8));
  CHECK(r.granted);
  CHECK(clearance_from_probabilities({1, 1, 1, 1}, 0.99).score == 1.0);
  const auto none = clearance_from_probabilities({0, 0}, 0.0);
  CHECK(none.score == 0.0);
  CHECK_FALSE(none.granted);
  CHECK_FALSE(clearance_from_probabilities({0.5, 0.5}, 0.5).granted);
  CHECK_THROWS_AS(clearance_from_probabilities({}, 0.5), InputError);
  CHECK_THROWS_AS(clearance_from_probabilities({1.2}, 0.5), InputError);
  CHECK_THROWS_AS(clearance({}, [](Vec3) { return 1.0; }, 0.5), InputError);
  const auto by_x = clearance(kPath, [](Vec3 p) { return p.x / 100.0; }, 0.2);
  CHECK(by_x.score == doctest::Approx(1.0 / 3.0));
  CHECK(by_x.probabilities == std::vector<double>{0.1, 0.3, 0.6});
}

TEST_CASE("probability memo caches per setting and point") {
  const auto c = cola::parse_file(fixture::data("drone.cola"));
  const auto sm = pilot_map();
  ProbabilityMemo memo(c, sm);
  const auto s = inference::default_setting(c);
  const double first = memo(s, {10, 10, 5});
  CHECK(memo.size() == 1);
  CHECK(memo(s, {10, 10, 5}) == first);
  CHECK(memo.size() == 1);
  CHECK(first == doctest::Approx(inference::query_probability(c, sm, {10, 10, 5}, s)));
  memo(inference::make_setting(c, {"special_license", "day"}), {10, 10, 5});
  CHECK(memo.size() == 2);
}

TEST_CASE("setting enumeration") {
  const auto c = cola::parse_file(fixture::data("drone.cola"));
  const auto all = enumerate_settings(c);
  REQUIRE(all.size() == 4);
  CHECK(all[0].choices == std::vector<std::string>{"regular_license", "day"});
  CHECK(all[1].choices == std::vector<std::string>{"regular_license", "night"});
  CHECK(all[3].choices == std::vector<std::string>{"special_license", "night"});
  const auto night = enumerate_settings(c, {"night"});
  REQUIRE(night.size() == 2);
  for (const auto& s : night) CHECK(s.choices[1] == "night");
  CHECK_THROWS_AS(enumerate_settings(c, {}, 3), ResourceError);
  CHECK(group_label(c.parameter_groups[0]) == "regular_license/special_license");
}

TEST_CASE("explanation on the drone example") {
  const auto c = cola::parse_file(fixture::data("drone.cola"));
  const auto sm = pilot_map();
  const auto report = explain(c, sm, kPath);
  REQUIRE(report.scores.size() == 4);
  REQUIRE(report.impacts.size() == 2);
  for (std::size_t i = 1; i < report.scores.size(); ++i) {
    CHECK(report.scores[i - 1].score >= report.scores[i].score);
  }
  CHECK(report.scores[0].setting.choices[0] == "special_license");
  CHECK(report.scores[0].score == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report.impacts[0].impact == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report.impacts[1].impact == doctest::Approx(0.0));
  for (const auto& s : report.scores) CHECK(s.granted == (s.score > 0.5));
  const auto table = explanation_table(report);
  CHECK(table.find("special_license") != std::string::npos);
  const auto csv = explanation_csv(report);
  CHECK(csv.rfind("regular_license/special_license,day/night,score,granted\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("explanation edge cases") {
  const auto sm = fixture::constant_starmap({{RelationKind::over, "park", 0.3}});
  SUBCASE("no parameters") {
    const auto c = cola::parse("field objective o if over(park).");
    const auto report = explain(c, sm, kPath);
    REQUIRE(report.scores.size() == 1);
    CHECK(report.impacts.empty());
    CHECK(report.scores[0].score == doctest::Approx(0.3));
  }
  SUBCASE("unused group") {
    const auto c = cola::parse("parameter {a, b}.\nfield objective o if over(park).");
    const auto report = explain(c, sm, kPath);
    REQUIRE(report.impacts.size() == 1);
    CHECK(report.impacts[0].impact == 0.0);
  }
}

TEST_CASE("optimization agrees with exhaustive search") {
  const auto c = cola::parse("parameter {a, b, c}.\nparameter {x, y}.\nparameter {p, q}.\n"
                             "field objective o if over(park).");
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<inference::MissionSetting, double> table;
    for (const auto& s : enumerate_settings(c)) table[s] = std::round(u(rng) * 8) / 8;
    const SettingScorer scorer = [&](const inference::MissionSetting& s) { return table.at(s); };
    const auto best = optimize_setting_with(c, scorer);
    double top = -1.0;
    inference::MissionSetting first_top;
    for (const auto& s : enumerate_settings(c)) {
      if (table[s] > top) {
        top = table[s];
        first_top = s;
      }
    }
    CHECK(best.score == top);
    CHECK(best.setting == first_top);
  }
}

TEST_CASE("optimization on the drone example") {
  const auto c = cola::parse_file(fixture::data("drone.cola"));
  const auto sm = pilot_map();
  const auto best = optimize_setting(c, sm, kPath);
  CHECK(best.setting.choices == std::vector<std::string>{"special_license", "day"});
  ExplainOptions only_regular;
  only_regular.allowed = {"regular_license"};
  CHECK(optimize_setting(c, sm, kPath, only_regular).setting.choices[0] == "regular_license");
  ExplainOptions single;
  single.allowed = {"regular_license", "night"};
  const auto one = optimize_setting(c, sm, kPath, single);
  CHECK(one.setting.choices == std::vector<std::string>{"regular_license", "night"});
}

TEST_CASE("rejection curve") {
  SUBCASE("all granted at every threshold below one") {
    const auto r = rejection_area({1.0, 1.0});
    CHECK(r.rates.front() == 0.0);
    CHECK(r.rates.back() == 0.0);
    CHECK(r.area == 0.0);
  }
  SUBCASE("all zero") {
    const auto r = rejection_area({0.0, 0.0, 0.0});
    CHECK(r.rates.front() == 0.0);
    CHECK(r.area == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("two scores") {
    const auto r = rejection_area({0.2, 0.6});
    CHECK(r.thresholds.size() == 1001);
    CHECK(r.area == doctest::Approx(0.6).epsilon(1e-3));
    for (std::size_t k = 1; k < r.rates.size(); ++k) CHECK(r.rates[k] >= r.rates[k - 1]);
  }
  SUBCASE("first-order convergence") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> scores(25);
    double exact = 0.0;
    for (auto& s : scores) {
      s = u(rng);
      exact += (1.0 - s) / static_cast<double>(scores.size());
    }
    for (std::size_t samples : {11u, 101u, 1001u, 10001u}) {
      const double err = std::abs(rejection_area(scores, samples).area - exact);
      CHECK(err <= 1.0 / static_cast<double>(samples - 1));
    }
  }
  CHECK_THROWS_AS(rejection_area({}), InputError);
}

TEST_CASE("rejection CSV round trip") {
  const auto r = rejection_area({0.1, 0.35, 0.9}, 21);
  const auto back = read_rejection_csv(rejection_csv(r));
  REQUIRE(back.thresholds.size() == r.thresholds.size());
  for (std::size_t k = 0; k < r.rates.size(); ++k) {
    CHECK(back.thresholds[k] == doctest::Approx(r.thresholds[k]));
    CHECK(back.rates[k] == doctest::Approx(r.rates[k]));
  }
  CHECK(back.area == doctest::Approx(r.area));
  CHECK_THROWS_AS(read_rejection_csv("a,b\n1,2\n"), InputError);
}
