// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "aerolex/cli.hpp"
#include "aerolex/cola.hpp"
#include "aerolex/errors.hpp"
#include "aerolex/inference.hpp"
#include "aerolex/mission.hpp"
#include "aerolex/nurbs.hpp"
#include "aerolex/objectives.hpp"
#include "aerolex/router.hpp"
#include "aerolex/starmap.hpp"
#include "support.hpp"

using namespace aerolex;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0 && code != 1) std::cerr << e.str();
  return code;
}

// Shared desk fixture: star map for the Paris-style constitution.
struct Desk {
  std::string root = fixture::scratch("acceptance");
  std::string star = root + "/star";
  std::string cfg = fixture::data("desk.cfg");
  std::string cola = fixture::data("desk.cola");
  std::string map = fixture::data("synthetic_map.geojson");
  bool built = false;

  void build() {
    if (built) return;
    if (cli({"build-starmap", "--map", map, "--constitution", cola, "--config", cfg, "--output",
             star}) != 0) {
      throw std::runtime_error("build-starmap failed");
    }
    built = true;
  }
};

Desk& desk() {
  static Desk d;
  return d;
}

Outcome wmc_oracle() {
  Outcome o;
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200 && o.pass; ++i) {
    const auto gp = oracle::random_program(rng, 1 + i % 10, 8, false);
    const double got = inference::wmc(inference::enumerate_models(gp), gp);
    const double want = oracle::brute_force_wmc(gp);
    o.require(std::abs(got - want) <= 1e-9,
              "program " + std::to_string(i) + ": " + num(got) + " vs " + num(want));
  }
  return o;
}

Outcome hybrid_intervals() {
  Outcome o;
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 100 && o.pass; ++i) {
    const double mu = u(rng), sigma = 0.5 + std::abs(u(rng)) / 5;
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) b = a + 1.0;
    const double got = inference::interval_masses(mu, sigma, {a, b})[1];
    const double want = oracle::normal_cdf(b, mu, sigma) - oracle::normal_cdf(a, mu, sigma);
    o.require(std::abs(got - want) <= 1e-12, "case " + std::to_string(i));
  }
  const auto c = cola::parse_file(fixture::data("drone.cola"));
  const auto sm = fixture::constant_starmap({{starmap::RelationKind::distance, "pilot", 50.0, 5.0}});
  const double p = inference::query_probability(c, sm, {10, 10, 0}, inference::default_setting(c),
                                                "light_drone");
  const double ref = oracle::normal_cdf(5.0, 20.0, 1.0);
  o.require(std::abs(p / ref - 1.0) <= 1e-9 && std::abs(p / 3.7e-51 - 1.0) < 0.01,
            "P(take_off_mass < 5) = " + num(p));
  return o;
}

Outcome license_dominance() {
  Outcome o;
  desk().build();
  const auto c = cola::parse_file(desk().cola);
  const auto sm = starmap::load_star_map(desk().star);
  const GridSpec3D grid{{0, 0, 0}, {20, 20, 20}, 51, 51, 11};
  for (const char* time : {"daytime", "nighttime"}) {
    const auto standard =
        inference::probability_field(c, sm, grid, inference::make_setting(c, {"standard_license", time}));
    const auto expanded =
        inference::probability_field(c, sm, grid, inference::make_setting(c, {"expanded_license", time}));
    for (std::size_t n = 0; n < grid.size() && o.pass; ++n) {
      o.require(expanded.values()[n] >= standard.values()[n],
                std::string(time) + " node " + std::to_string(n));
    }
  }
  return o;
}

Waypoints random_polyline(std::mt19937_64& rng, int n, double extent) {
  std::uniform_real_distribution<double> u(0, extent);
  Waypoints w;
  for (int i = 0; i < n; ++i) w.push_back({u(rng), u(rng), u(rng)});
  return w;
}

Outcome line_integral() {
  Outcome o;
  std::mt19937_64 rng(104);
  const GridSpec3D spec{{0, 0, 0}, {10, 10, 10}, 11, 11, 11};
  std::uniform_real_distribution<double> cu(0.1, 10);
  for (int i = 0; i < 100 && o.pass; ++i) {
    const double c = cu(rng);
    const ScalarGrid3D field(spec, c);
    const auto a = random_polyline(rng, 2 + i % 8, 100);
    const double got = objectives::line_integral(field, a);
    const double want = c * objectives::path_length(a);
    o.require(std::abs(got - want) <= 1e-6 * want, "constant field, case " + std::to_string(i));

    std::vector<double> values(spec.size());
    for (auto& v : values) v = cu(rng);
    const ScalarGrid3D varied(spec, values);
    auto b = random_polyline(rng, 2 + i % 5, 100);
    b.front() = a.back();
    Waypoints ab = a;
    ab.insert(ab.end(), b.begin() + 1, b.end());
    const double whole = objectives::line_integral(varied, ab);
    const double parts = objectives::line_integral(varied, a) + objectives::line_integral(varied, b);
    o.require(std::abs(whole - parts) <= 1e-9 * std::max(1.0, std::abs(whole)),
              "additivity, case " + std::to_string(i));
  }
  return o;
}

Outcome energy_model() {
  Outcome o;
  const objectives::UavParameters uav;
  const double level = objectives::energy_cost({{0, 0, 0}, {1000, 0, 0}}, uav);
  o.require(std::abs(level / 9237.6 - 1.0) <= 1e-9, "level path: " + num(level));
  const double hop =
      objectives::energy_cost({{0, 0, 0}, {0, 0, 100}, {1000, 0, 100}, {1000, 0, 0}}, uav);
  o.require(std::abs(hop / 32037.6 - 1.0) <= 1e-9, "climb and descent: " + num(hop));
  return o;
}

Outcome radio_field() {
  Outcome o;
  const GridSpec3D spec{{0, 0, 0}, {1, 1, 75}, 40, 40, 3};
  const auto g = objectives::build_radio_grid({{0, 0}}, spec, {});
  o.require(g.at(0, 0, 1) == -200.0, "value at the tower: " + num(g.at(0, 0, 1)));
  o.require(g.at(1, 0, 1) == -50.0, "r = 1: " + num(g.at(1, 0, 1)));
  for (auto [di, dj] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 1}}) {
    for (std::size_t s = 1; (s * di) < spec.nx && (s * dj) < spec.ny; ++s) {
      o.require(g.at(s * di, s * dj, 1) > g.at((s - 1) * di, (s - 1) * dj, 1) &&
                    g.at(s * di, s * dj, 1) < 0.0,
                "ray (" + std::to_string(di) + ", " + std::to_string(dj) + ") step " +
                    std::to_string(s));
    }
  }
  return o;
}

Outcome dijkstra_optimality() {
  Outcome o;
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(0.1, 10);
  std::uniform_int_distribution<std::size_t> side(2, 4), layers(1, 2);
  for (int i = 0; i < 50 && o.pass; ++i) {
    const GridSpec3D spec{{0, 0, 0}, {1.0 + u(rng) / 5, 1.0 + u(rng) / 5, 1.0 + u(rng) / 5},
                          side(rng), side(rng), layers(rng)};
    std::vector<double> values(spec.size());
    for (auto& v : values) v = u(rng);
    const ScalarGrid3D cost(spec, values);
    std::uniform_int_distribution<std::size_t> node(0, spec.size() - 1);
    std::size_t s = node(rng), t = node(rng);
    while (t == s) t = node(rng);
    auto grid_node = [&](std::size_t n) {
      return router::GridNode{n % spec.nx, (n / spec.nx) % spec.ny, n / (spec.nx * spec.ny)};
    };
    const double got = router::dijkstra_grid(cost, grid_node(s), grid_node(t)).cost;
    const double want = oracle::min_simple_path_cost(cost, s, t);
    o.require(got == want, "grid " + std::to_string(i) + ": " + num(got) + " vs " + num(want));
  }
  return o;
}

Outcome nurbs_adaptation() {
  Outcome o;
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.1, 10);
  const GridSpec3D spec{{0, 0, 0}, {20, 20, 20}, 20, 20, 5};
  for (int i = 0; i < 20 && o.pass; ++i) {
    std::vector<double> values(spec.size());
    for (auto& v : values) v = u(rng);
    const ScalarGrid3D cost(spec, values);
    std::uniform_int_distribution<std::size_t> lo(0, 4), hi(15, 19), z(0, 4);
    const auto path = router::dijkstra_grid(cost, {lo(rng), lo(rng), z(rng)}, {hi(rng), hi(rng), z(rng)});
    const auto smoothed = router::smooth_polypath(path.points);
    const double eps = 2.0 + i;
    const auto a = nurbs::approximate_nurbs(smoothed, eps);
    o.require(a.max_deviation <= eps, "path " + std::to_string(i) + " deviation " + num(a.max_deviation));
    o.require(a.curve.control_points.size() <= smoothed.size(), "path " + std::to_string(i) + " n_P");
  }
  return o;
}

Outcome nsga_invariants() {
  Outcome o;
  const GridSpec3D spec{{0, 0, 0}, {10, 10, 10}, 11, 11, 6};
  ScalarGrid3D field(spec, 0.0);
  for (std::size_t n = 0; n < spec.size(); ++n) {
    field.values()[n] = std::exp(-std::pow((spec.node(n).y - 50.0) / 20.0, 2));
  }
  const std::vector<router::ObjectiveEvaluator> objs{
      {"length", [](const Waypoints& w) { return objectives::path_length(w); }},
      {"exposure", [&](const Waypoints& w) { return objectives::line_integral(field, w); }}};
  const Vec3 start{0, 50, 10}, goal{100, 50, 10};
  std::vector<nurbs::NurbsCurve> seeds;
  for (double off : {0.0, 20.0, -30.0}) {
    nurbs::NurbsCurve c;
    c.knots = {0, 0, 0, 1.0 / 3, 2.0 / 3, 1, 1, 1};
    c.control_points.push_back(start);
    for (int k = 1; k <= 3; ++k) c.control_points.push_back({25.0 * k, 50 + off, 10});
    c.control_points.push_back(goal);
    seeds.push_back(c);
  }
  router::EvolveConfig cfg;
  cfg.population = 30;
  cfg.generations = 100;
  cfg.mutation_sigma = 5.0;
  cfg.seed = 11;
  cfg.bounds = {{0, 0, 0}, {100, 100, 50}};

  router::EvolveTrace trace;
  trace.hypervolume_reference = router::ObjectiveVector{400.0, 200.0};
  trace.on_generation = [&](std::size_t gen, const std::vector<router::Individual>& pop) {
    for (const auto& ind : pop) {
      const auto c = router::curve_of(ind, start, goal);
      bool ok = c.control_points.front() == start && c.control_points.back() == goal;
      for (const auto& p : c.control_points) ok = ok && cfg.bounds.contains(p);
      o.require(ok, "generation " + std::to_string(gen) + " left the bounds");
    }
  };
  const auto set = router::evolve(seeds, objs, cfg, &trace);
  const auto v = set.objective_vectors();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      o.require(!router::dominates(v[i], v[j]), "front members dominate each other");
    }
  }
  o.require(trace.archive_hypervolume.size() == cfg.generations + 1, "hypervolume trace length");
  for (std::size_t g = 1; g < trace.archive_hypervolume.size(); ++g) {
    o.require(trace.archive_hypervolume[g] >= trace.archive_hypervolume[g - 1],
              "hypervolume fell at generation " + std::to_string(g));
  }
  const auto again = router::evolve(seeds, objs, cfg);
  bool same = again.members.size() == set.members.size();
  for (std::size_t m = 0; same && m < set.members.size(); ++m) {
    same = again.members[m].genome == set.members[m].genome;
  }
  o.require(same, "same seed gave a different front");
  return o;
}

Outcome clearance_identities() {
  Outcome o;
  std::mt19937_64 rng(110);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> scores;
  for (int i = 0; i < 100; ++i) {
    Waypoints path;
    std::vector<double> ps;
    for (int k = 0; k < 5 + i % 20; ++k) {
      path.push_back({static_cast<double>(k), 0, 0});
      ps.push_back(u(rng));
    }
    double mean = 0.0;
    for (double p : ps) mean += p;
    mean /= static_cast<double>(ps.size());
    const auto r = mission::clearance(path, [&](Vec3 p) { return ps[static_cast<std::size_t>(p.x)]; }, 0.5);
    o.require(std::abs(r.score - mean) <= 1e-12, "path " + std::to_string(i));
    scores.push_back(r.score);
  }
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  const auto curve = mission::rejection_area(scores, 1001);
  o.require(std::abs(curve.area - (1.0 - mean)) <= 1e-3,
            "area " + num(curve.area) + " vs " + num(1.0 - mean));
  return o;
}

Outcome optimize_oracle() {
  Outcome o;
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(0, 1);
  const std::vector<std::string> tags{"park", "water", "road"};
  const Waypoints path{{10, 10, 10}, {40, 50, 20}, {90, 80, 10}};
  for (int t = 0; t < 20 && o.pass; ++t) {
    std::ostringstream src;
    const int groups = 1 + t % 3;
    std::vector<std::vector<std::string>> options;
    std::size_t product = 1;
    for (int g = 0; g < groups; ++g) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, groups == 3 ? 2 : 4)(rng);
      product *= n;
      options.emplace_back();
      src << "parameter {";
      for (std::size_t k = 0; k < n; ++k) {
        options.back().push_back("g" + std::to_string(g) + "o" + std::to_string(k));
        src << (k ? ", " : "") << options.back().back();
      }
      src << "}.\n";
    }
    if (product > 16) throw std::logic_error("too many settings");
    src << "field objective o if ";
    for (std::size_t clause = 0; clause < 3; ++clause) {
      const auto& g = options[clause % options.size()];
      src << (clause ? " or " : "") << g[std::uniform_int_distribution<std::size_t>(0, g.size() - 1)(rng)]
          << " and over(" << tags[clause] << ")";
    }
    src << ".\n";
    const auto c = cola::parse(src.str());
    std::vector<fixture::LayerSpec> layers;
    for (const auto& tag : tags) layers.push_back({starmap::RelationKind::over, tag, std::round(u(rng) * 4) / 4});
    const auto sm = fixture::constant_starmap(layers);

    double best = -1.0;
    inference::MissionSetting best_setting;
    for (const auto& s : mission::enumerate_settings(c)) {
      double sum = 0.0;
      for (const auto& p : path) sum += inference::query_probability(c, sm, p, s);
      const double score = sum / static_cast<double>(path.size());
      if (score > best + 1e-12) {
        best = score;
        best_setting = s;
      }
    }
    const auto got = mission::optimize_setting(c, sm, path);
    o.require(std::abs(got.score - best) <= 1e-12 && got.setting == best_setting,
              "constitution " + std::to_string(t) + ": " + inference::to_string(got.setting) + " vs " +
                  inference::to_string(best_setting));
  }

  desk().build();
  const auto c = cola::parse_file(desk().cola);
  const auto sm = starmap::load_star_map(desk().star);
  Waypoints diagonal;
  for (int k = 0; k <= 40; ++k) diagonal.push_back({40 + 23.0 * k, 40 + 23.0 * k, 60});
  const auto best = mission::optimize_setting(c, sm, diagonal);
  o.require(best.setting.choices[0] == "expanded_license",
            "desk optimum " + inference::to_string(best.setting));
  return o;
}

double clearance_of(const std::string& path, const std::string& setting) {
  std::string out;
  const int code = cli({"clearance", "--path", path, "--constitution", desk().cola, "--starmap",
                        desk().star, "--config", desk().cfg, "--setting", setting},
                       &out);
  if (code != 0 && code != 1) throw std::runtime_error("clearance failed");
  const auto at = out.find("clearance: ");
  if (at == std::string::npos) throw std::runtime_error("clearance output lacks a score");
  return std::stod(out.substr(at + 11));
}

Outcome desk_run() {
  Outcome o;
  desk().build();
  const std::string route = desk().root + "/route";
  const auto t0 = std::chrono::steady_clock::now();
  const int code = cli({"route", "--constitution", desk().cola, "--starmap", desk().star, "--map",
                        desk().map, "--config", desk().cfg, "--start", "40,40,0", "--goal",
                        "960,960,0", "--output", route});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(code == 0, "route exited " + std::to_string(code));
  o.require(seconds < 300.0, "route took " + num(seconds) + " s");
  if (!o.pass) return o;

  const auto selection = nlohmann::json::parse(fixture::read_file(route + "/selection.json"));
  char name[64];
  std::snprintf(name, sizeof name, "/paths/member_%03zu.geojson", selection["knee"].get<std::size_t>());
  const std::string knee = route + name;
  double standard = 0.0, expanded = 0.0;
  for (const char* time : {"daytime", "nighttime"}) {
    const double s = clearance_of(knee, std::string("standard_license,") + time);
    const double e = clearance_of(knee, std::string("expanded_license,") + time);
    o.require(e >= s, std::string(time) + ": expanded " + num(e) + " < standard " + num(s));
    if (std::string(time) == "daytime") {
      standard = s;
      expanded = e;
    }
  }

  const std::string plots = desk().root + "/plots";
  o.require(cli({"export-plots", "--route", route, "--altitudes", "0,100,200", "--config",
                 desk().cfg, "--output", plots}) == 0,
            "export-plots failed");
  for (const char* f : {"compliance_probability_z0.ppm", "compliance_probability_z100.ppm",
                        "compliance_probability_z200.ppm", "rejection.svg"}) {
    o.require(fs::exists(fs::path(plots) / f), std::string("missing ") + f);
  }
  if (o.pass) {
    o.detail = "route " + num(std::round(seconds * 10) / 10) + " s, knee clearance standard " +
               num(standard) + ", expanded " + num(expanded);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"WMC oracle equivalence", wmc_oracle},
      {"hybrid intervals", hybrid_intervals},
      {"license dominance", license_dominance},
      {"line integral", line_integral},
      {"energy model", energy_model},
      {"radio field", radio_field},
      {"Dijkstra optimality", dijkstra_optimality},
      {"NURBS adaptation", nurbs_adaptation},
      {"NSGA-II invariants", nsga_invariants},
      {"clearance identities", clearance_identities},
      {"optimize-setting oracle", optimize_oracle},
      {"end-to-end desk run", desk_run},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first;
    if (!o.detail.empty()) std::cout << "  (" << o.detail << ")";
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
