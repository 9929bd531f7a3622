#include "aerolex/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aerolex/cola.hpp"
#include "aerolex/config.hpp"
#include "aerolex/errors.hpp"
#include "aerolex/geo.hpp"
#include "aerolex/inference.hpp"
#include "aerolex/mission.hpp"
#include "aerolex/objectives.hpp"
#include "aerolex/parallel.hpp"
#include "aerolex/router.hpp"
#include "aerolex/starmap.hpp"
#include "internal.hpp"

namespace aerolex::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string output;
  std::string setting;
};

struct Inputs {
  std::string map;
  std::string constitution;
  std::string starmap;
  std::string path;
  std::string start, goal;
  std::string query;
  std::string allowed;
  std::vector<std::string> grids;
  std::string altitudes;
  std::vector<std::string> rejections;
  std::vector<std::string> paths;
  std::string route_dir;
};

MissionConfig load(const Common& common) {
  MissionConfig cfg = common.config_file.empty() ? MissionConfig{} : load_config(common.config_file);
  if (common.seed) cfg.seed = *common.seed;
  if (common.threads) cfg.threads = *common.threads;
  if (!common.setting.empty()) {
    cfg.setting.clear();
    std::istringstream in(common.setting);
    for (std::string item; std::getline(in, item, ',');) {
      if (!item.empty()) cfg.setting.push_back(item);
    }
  }
  cfg.check();
  set_max_threads(cfg.threads);
  return cfg;
}

fs::path output_dir(const Common& common) {
  if (common.output.empty()) throw InputError("--output is required");
  fs::path dir(common.output);
  fs::create_directories(dir);
  return dir;
}

Vec3 parse_point(const std::string& text, const char* what) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  Vec3 p;
  std::string rest;
  if (!(in >> p.x >> p.y >> p.z) || (in >> rest)) {
    throw InputError(std::string(what) + " must be 'x,y,z' in local meters");
  }
  return p;
}

cola::Constitution load_constitution(const std::string& file) {
  if (file.empty()) throw InputError("--constitution is required");
  return cola::parse_file(file);
}

starmap::StarMap load_starmap(const std::string& dir, const cola::Constitution& c,
                              const std::string& constitution_file) {
  if (!dir.empty()) return starmap::load_star_map(dir);
  if (c.star_map_ref.empty()) throw InputError("--starmap is required");
  return starmap::load_star_map(
      (fs::path(constitution_file).parent_path() / c.star_map_ref).string());
}

void require_valid(const cola::Constitution& c, const starmap::StarMap& sm) {
  const auto diagnostics = cola::validate(c, sm);
  if (diagnostics.empty()) return;
  std::string msg = "constitution is invalid:";
  for (const auto& d : diagnostics) {
    msg += "\n  line " + std::to_string(d.where.line) + ": " + std::string(to_string(d.code)) +
           ": " + d.message;
  }
  throw InputError(msg);
}

inference::MissionSetting active_setting(const cola::Constitution& c, const MissionConfig& cfg) {
  return cfg.setting.empty() ? inference::default_setting(c)
                             : inference::make_setting(c, cfg.setting);
}

// Paths already spaced at about the waypoint resolution (route outputs) are used as they are;
// coarser inputs are resampled.
Waypoints clearance_waypoints(const Waypoints& path, double delta) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (distance(path[i - 1], path[i]) > delta * 1.1) {
      return objectives::resample_polyline(path, delta);
    }
  }
  return path;
}

std::string model_for(const cola::ObjectiveDecl& o, const MissionConfig& cfg) {
  if (auto it = cfg.models.find(o.name); it != cfg.models.end()) return it->second;
  const std::string stem = fs::path(o.model_ref).stem().string();
  if (auto it = cfg.models.find(stem); it != cfg.models.end()) return it->second;
  return stem.empty() ? o.name : stem;
}

// --- commands ---------------------------------------------------------------

int cmd_build_starmap(const Common& common, const Inputs& in, std::ostream& out) {
  const MissionConfig cfg = load(common);
  if (in.map.empty()) throw InputError("--map is required");
  const cola::Constitution c = load_constitution(in.constitution);
  const auto loaded = geo::load_geojson_file(in.map, cfg.bounds);
  std::vector<starmap::LayerKey> relations;
  for (const auto& [kind, tag] : cola::referenced_relations(c)) {
    if (loaded.map.features_with_tag(tag).empty()) {
      throw InputError("tag '" + tag + "' referenced by the constitution has no features in " +
                       in.map);
    }
    relations.push_back({kind == "over" ? starmap::RelationKind::over
                                        : starmap::RelationKind::distance,
                         tag});
  }
  const auto sm = starmap::build_star_map(loaded.map, cfg.perturbation(), relations,
                                          cfg.starmap_grid(), cfg.seed,
                                          fs::path(in.map).filename().string());
  const fs::path dir = output_dir(common);
  starmap::save_star_map(sm, dir.string());
  out << "star map with " << sm.layers().size() << " layers written to " << dir.string() << "\n";
  if (loaded.dropped_untagged || loaded.dropped_outside) {
    out << "dropped " << loaded.dropped_untagged << " untagged and " << loaded.dropped_outside
        << " out-of-bounds features\n";
  }
  return kSuccess;
}

int cmd_infer_field(const Common& common, const Inputs& in, std::ostream& out) {
  const MissionConfig cfg = load(common);
  const cola::Constitution c = load_constitution(in.constitution);
  const auto sm = load_starmap(in.starmap, c, in.constitution);
  require_valid(c, sm);
  const auto setting = active_setting(c, cfg);
  std::optional<std::string> query;
  if (!in.query.empty()) query = in.query;
  const auto field = inference::probability_field(c, sm, cfg.navigation_grid(), setting, query,
                                                  {cfg.max_bits});
  const fs::path file = output_dir(common) / ((query ? *query : "probability") + ".grid");
  save_grid3(file.string(), field);
  out << "probability field (" << inference::to_string(setting) << ") written to "
      << file.string() << "\n";
  return kSuccess;
}

struct ObjectiveSet {
  std::vector<std::string> names;
  std::deque<ScalarGrid3D> grids;
  std::vector<std::pair<std::string, const ScalarGrid3D*>> grid_files;
  std::vector<router::GridObjective> grid_objectives;
  std::vector<router::ObjectiveEvaluator> evaluators;
};

ObjectiveSet build_objectives(const cola::Constitution& c, const starmap::StarMap& sm,
                              const MissionConfig& cfg, const inference::MissionSetting& setting,
                              const std::optional<geo::FeatureMap>& map) {
  ObjectiveSet set;
  const GridSpec3D spec = cfg.navigation_grid();
  auto need_map = [&](const std::string& model) -> const geo::FeatureMap& {
    if (!map) throw InputError("model '" + model + "' needs the feature map (--map)");
    return *map;
  };
  auto add_grid = [&](const std::string& name, ScalarGrid3D grid) {
    set.grids.push_back(std::move(grid));
    const ScalarGrid3D* g = &set.grids.back();
    set.grid_files.push_back({name, g});
    set.grid_objectives.push_back({name, g});
    set.evaluators.push_back(
        {name, [g](const Waypoints& w) { return objectives::line_integral(*g, w); }});
  };
  for (const auto& o : c.objectives) {
    set.names.push_back(o.name);
    if (o.source == cola::ObjectiveSource::logic) {
      const auto p = inference::probability_field(c, sm, spec, setting, o.name, {cfg.max_bits});
      add_grid(o.name, objectives::compliance_cost_grid(p));
      continue;
    }
    const std::string model = model_for(o, cfg);
    if (o.scope == cola::ObjectiveScope::path) {
      if (model != "energy") {
        throw InputError("path objective '" + o.name + "': unknown path model '" + model +
                         "' (available: energy)");
      }
      const auto uav = cfg.uav;
      set.evaluators.push_back(
          {o.name, [uav](const Waypoints& w) { return objectives::energy_cost(w, uav); }});
      continue;
    }
    if (model == "radio") {
      std::vector<Vec2> towers;
      for (const auto* f : need_map(model).features_with_tag(cfg.radio_tower_tag)) {
        towers.push_back(f->kind == geo::GeometryKind::point ? f->vertices.front() : f->centroid());
      }
      if (towers.empty()) {
        throw InputError("radio model: no features tagged '" + cfg.radio_tower_tag + "'");
      }
      ScalarGrid3D g = objectives::build_radio_grid(towers, spec, cfg.radio);
      // Shifted so that the best signal costs 0 and every cost is >= 0.
      for (double& v : g.values()) v -= cfg.radio.d0;
      add_grid(o.name, std::move(g));
    } else if (model == "noise") {
      add_grid(o.name, objectives::build_noise_grid(need_map(model), spec));
    } else if (model == "risk") {
      add_grid(o.name, objectives::build_risk_grid(need_map(model), spec));
    } else {
      throw InputError("field objective '" + o.name + "': unknown model '" + model +
                       "' (available: radio, noise, risk)");
    }
  }
  if (set.grid_objectives.empty()) {
    throw InputError("routing needs at least one field objective");
  }
  return set;
}

int cmd_route(const Common& common, const Inputs& in, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const MissionConfig cfg = load(common);
  const cola::Constitution c = load_constitution(in.constitution);
  const auto sm = load_starmap(in.starmap, c, in.constitution);
  require_valid(c, sm);
  if (in.start.empty() || in.goal.empty()) throw InputError("--start and --goal are required");
  const Vec3 start = parse_point(in.start, "--start");
  const Vec3 goal = parse_point(in.goal, "--goal");
  const GridSpec3D spec = cfg.navigation_grid();
  if (!spec.contains(start)) throw InputError("start lies outside the navigation bounds");
  if (!spec.contains(goal)) throw InputError("goal lies outside the navigation bounds");
  if (start == goal) throw InputError("start and goal coincide");
  const auto setting = active_setting(c, cfg);
  std::optional<geo::FeatureMap> map;
  if (!in.map.empty()) map = geo::load_geojson_file(in.map, cfg.bounds).map;

  ObjectiveSet objs = build_objectives(c, sm, cfg, setting, map);

  router::RouteConfig rc;
  rc.weighted_solutions = cfg.weighted_solutions;
  rc.approximation_epsilon = cfg.effective_nurbs_epsilon();
  rc.evolve.population = cfg.individuals;
  rc.evolve.generations = cfg.generations;
  rc.evolve.mutation_sigma = cfg.mutation_sigma;
  rc.evolve.mutation_probability = cfg.mutation_probability;
  rc.evolve.gene_mutation_probability = cfg.gene_mutation_probability;
  rc.evolve.crossover_probability = cfg.crossover_probability;
  rc.evolve.waypoint_resolution = cfg.waypoint_resolution;
  rc.evolve.seed = cfg.seed;
  rc.evolve.bounds = cfg.box();
  rc.evolve.degree = cfg.degree;
  const auto result = router::plan_routes(start, goal, objs.grid_objectives, objs.evaluators, rc);
  const auto& front = result.pareto;

  const fs::path dir = output_dir(common);
  fs::create_directories(dir / "paths");
  fs::create_directories(dir / "grids");

  mission::ProbabilityMemo memo(c, sm, {cfg.max_bits});
  const std::size_t knee = router::knee_point(front);
  const auto extremes = router::extreme_points(front);
  std::vector<double> scores;
  std::ostringstream csv;
  csv << "member";
  for (const auto& n : objs.names) csv << "," << n;
  csv << ",n_p,clearance,granted,path\n";
  for (std::size_t m = 0; m < front.members.size(); ++m) {
    PathRecord rec;
    rec.member = m;
    rec.waypoints = objectives::resample_path(front.curve(m), cfg.waypoint_resolution);
    const auto report = mission::clearance(
        rec.waypoints, [&](Vec3 p) { return memo(setting, p); }, cfg.clearance_threshold);
    rec.clearance = report.probabilities;
    rec.score = report.score;
    rec.granted = report.granted;
    for (std::size_t e = 0; e < objs.names.size(); ++e) {
      rec.objectives.push_back({objs.names[e], front.members[m].objectives[e]});
    }
    if (m == knee) rec.roles.push_back("knee");
    for (std::size_t e = 0; e < extremes.size(); ++e) {
      if (extremes[e] == m) rec.roles.push_back("extreme:" + objs.names[e]);
    }
    char name[32];
    std::snprintf(name, sizeof name, "member_%03zu.geojson", m);
    write_text((dir / "paths" / name).string(), path_geojson(rec, cfg.origin));
    scores.push_back(rec.score);
    csv << m;
    for (double v : front.members[m].objectives) csv << "," << format_double(v);
    csv << "," << front.curve(m).control_points.size() << "," << format_double(rec.score) << ","
        << (rec.granted ? 1 : 0) << ",paths/" << name << "\n";
  }
  write_text((dir / "pareto.csv").string(), csv.str());

  nlohmann::json selection = {{"setting", setting.choices}, {"knee", knee}};
  for (std::size_t e = 0; e < extremes.size(); ++e) {
    selection["extremes"][objs.names[e]] = extremes[e];
  }
  selection["objectives"] = objs.names;
  selection["seeds"] = result.seeds.size();
  write_text((dir / "selection.json").string(), selection.dump(1) + "\n");

  const auto curve = mission::rejection_area(scores, cfg.rejection_samples);
  write_text((dir / "rejection.csv").string(), mission::rejection_csv(curve));

  for (const auto& [name, grid] : objs.grid_files) {
    save_grid3((dir / "grids" / (name + ".grid")).string(), *grid);
  }
  save_grid3((dir / "grids" / "compliance_probability.grid").string(),
             inference::probability_field(c, sm, spec, setting, {}, {cfg.max_bits}));

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "pareto front: " << front.members.size() << " members from " << result.seeds.size()
      << " seed paths\n";
  out << "knee point: member " << knee << " (clearance " << format_double(scores[knee]) << ")\n";
  out << "rejection area over curve: " << format_double(curve.area) << "\n";
  out << "elapsed: " << std::round(secs * 10.0) / 10.0 << " s\n";
  return kSuccess;
}

struct PathContext {
  MissionConfig cfg;
  cola::Constitution c;
  starmap::StarMap sm;
  Waypoints waypoints;
};

PathContext load_path_context(const Common& common, const Inputs& in) {
  PathContext ctx{load(common), load_constitution(in.constitution), {}, {}};
  ctx.sm = load_starmap(in.starmap, ctx.c, in.constitution);
  require_valid(ctx.c, ctx.sm);
  if (in.path.empty()) throw InputError("--path is required");
  ctx.waypoints = clearance_waypoints(read_path_file(in.path, ctx.cfg.origin).waypoints,
                                      ctx.cfg.waypoint_resolution);
  return ctx;
}

int cmd_clearance(const Common& common, const Inputs& in, std::ostream& out) {
  const PathContext ctx = load_path_context(common, in);
  const auto setting = active_setting(ctx.c, ctx.cfg);
  mission::ProbabilityMemo memo(ctx.c, ctx.sm, {ctx.cfg.max_bits});
  const auto report = mission::clearance(
      ctx.waypoints, [&](Vec3 p) { return memo(setting, p); }, ctx.cfg.clearance_threshold);
  out << "setting: " << inference::to_string(setting) << "\n";
  out << "waypoints: " << ctx.waypoints.size() << "\n";
  out << "clearance: " << format_double(report.score) << "\n";
  out << "threshold: " << format_double(report.threshold) << "\n";
  out << "verdict: " << (report.granted ? "granted" : "denied") << "\n";
  return report.granted ? kSuccess : kDenied;
}

mission::ExplainOptions explain_options(const MissionConfig& cfg, const std::string& allowed) {
  mission::ExplainOptions o;
  o.threshold = cfg.clearance_threshold;
  o.max_settings = cfg.explain_limit;
  o.inference.max_bits = cfg.max_bits;
  o.allowed = cfg.allowed;
  if (!allowed.empty()) {
    o.allowed.clear();
    std::istringstream in(allowed);
    for (std::string item; std::getline(in, item, ',');) {
      if (!item.empty()) o.allowed.push_back(item);
    }
  }
  return o;
}

int cmd_explain(const Common& common, const Inputs& in, std::ostream& out) {
  const PathContext ctx = load_path_context(common, in);
  const auto report =
      mission::explain(ctx.c, ctx.sm, ctx.waypoints, explain_options(ctx.cfg, in.allowed));
  out << mission::explanation_table(report);
  if (!common.output.empty()) {
    const fs::path file = output_dir(common) / "explanation.csv";
    write_text(file.string(), mission::explanation_csv(report));
  }
  return kSuccess;
}

int cmd_optimize(const Common& common, const Inputs& in, std::ostream& out) {
  const PathContext ctx = load_path_context(common, in);
  const auto best =
      mission::optimize_setting(ctx.c, ctx.sm, ctx.waypoints, explain_options(ctx.cfg, in.allowed));
  out << "optimal setting: " << inference::to_string(best.setting) << "\n";
  out << "clearance: " << format_double(best.score) << "\n";
  out << "verdict: " << (best.score > ctx.cfg.clearance_threshold ? "granted" : "denied") << "\n";
  if (!common.output.empty()) {
    MissionConfig copy = ctx.cfg;
    copy.setting = best.setting.choices;
    const fs::path file = output_dir(common) / "config.optimized";
    write_text(file.string(), to_text(copy));
    out << "config written to " << file.string() << "\n";
  }
  return kSuccess;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_export_plots(const Common& common, const Inputs& in, std::ostream& out,
                     std::ostream& err) {
  const MissionConfig cfg = load(common);
  const fs::path dir = output_dir(common);
  std::vector<std::string> grids = in.grids;
  std::vector<std::string> rejections = in.rejections;
  std::vector<std::string> path_files = in.paths;
  bool path_set_given = !path_files.empty();
  if (!in.route_dir.empty()) {
    const fs::path route(in.route_dir);
    if (!fs::is_directory(route)) throw InputError("route directory '" + in.route_dir + "' not found");
    path_set_given = true;
    if (fs::exists(route / "paths")) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(route / "paths")) {
        if (has_suffix(e.path().string(), ".geojson")) found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      path_files.insert(path_files.end(), found.begin(), found.end());
    }
    if (fs::exists(route / "rejection.csv")) rejections.push_back((route / "rejection.csv").string());
    if (fs::exists(route / "grids" / "compliance_probability.grid") && grids.empty()) {
      grids.push_back((route / "grids" / "compliance_probability.grid").string());
    }
  }

  std::vector<double> altitudes;
  if (!in.altitudes.empty()) {
    std::istringstream s(in.altitudes);
    for (std::string item; std::getline(s, item, ',');) {
      try {
        altitudes.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InputError("--altitudes must be a comma-separated list of numbers");
      }
    }
  }
  std::size_t written = 0;
  for (const auto& g : grids) {
    if (!has_suffix(g, ".grid")) throw InputError("unknown grid format '" + g + "' (expected .grid)");
    const ScalarGrid3D grid = load_grid3(g);
    std::vector<double> zs = altitudes;
    if (zs.empty()) zs.push_back(grid.spec().origin.z);
    for (double z : zs) {
      char name[64];
      std::snprintf(name, sizeof name, "_z%g.ppm", z);
      const fs::path file = dir / (fs::path(g).stem().string() + name);
      write_text(file.string(), slice_ppm(grid, z));
      ++written;
    }
  }

  std::vector<PathRecord> paths;
  for (const auto& p : path_files) paths.push_back(read_path_file(p, cfg.origin));

  if (path_set_given && paths.empty()) {
    err << "warning: the path set is empty; rejection curve plot omitted\n";
  } else {
    std::vector<CurveSeries> series;
    for (const auto& r : rejections) {
      if (!has_suffix(r, ".csv")) throw InputError("unknown rejection curve format '" + r + "'");
      const auto curve = mission::read_rejection_csv(read_text(r));
      series.push_back({fs::path(r).parent_path().filename().string() + "/" +
                            fs::path(r).filename().string(),
                        curve.thresholds, curve.rates});
    }
    if (!series.empty()) {
      write_text((dir / "rejection.svg").string(),
                 curves_svg(series, "clearance threshold", "rejection rate"));
      ++written;
    }
  }
  if (!paths.empty()) {
    write_text((dir / "paths.svg").string(), overlay_svg(paths, cfg.bounds, cfg.clearance_threshold));
    ++written;
  }
  out << written << " plot files written to " << dir.string() << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compliant, multi-objective UAV route planning", "aerolex"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  Inputs in;
  app.add_option("--config", common.config_file, "Mission config file (key = value)");
  app.add_option("--seed", common.seed, "Random seed (overrides the config)");
  app.add_option("--threads", common.threads, "Worker thread cap (0 = all cores)");
  app.add_option("--output", common.output, "Output directory");
  app.add_option("--setting", common.setting, "Mission setting, comma-separated options");

  auto* build = app.add_subcommand("build-starmap", "Fit StaR map layers from a GeoJSON map");
  build->add_option("--map", in.map, "GeoJSON feature map")->required();
  build->add_option("--constitution", in.constitution, "CoLa constitution")->required();

  auto* infer = app.add_subcommand("infer-field", "Compute P(SAT) on the navigation grid");
  infer->add_option("--constitution", in.constitution)->required();
  infer->add_option("--starmap", in.starmap, "StaR map directory");
  infer->add_option("--query", in.query, "Rule head or objective (default: all logic objectives)");

  auto* route = app.add_subcommand("route", "Plan a Pareto set of paths");
  route->add_option("--constitution", in.constitution)->required();
  route->add_option("--starmap", in.starmap, "StaR map directory");
  route->add_option("--map", in.map, "GeoJSON feature map for model objectives");
  route->add_option("--start", in.start, "x,y,z in local meters")->required();
  route->add_option("--goal", in.goal, "x,y,z in local meters")->required();

  std::vector<CLI::App*> path_cmds = {
      app.add_subcommand("clearance", "Score a path against the constitution"),
      app.add_subcommand("explain", "Score a path under every mission setting"),
      app.add_subcommand("optimize", "Find the mission setting maximizing clearance"),
  };
  for (auto* cmd : path_cmds) {
    cmd->add_option("--path", in.path, "Path file (.geojson or .csv)")->required();
    cmd->add_option("--constitution", in.constitution)->required();
    cmd->add_option("--starmap", in.starmap, "StaR map directory");
    if (cmd->get_name() != "clearance") {
      cmd->add_option("--allow", in.allowed, "Restrict to these options, comma-separated");
    }
  }

  auto* plots = app.add_subcommand("export-plots", "Render heatmaps, rejection curves and overlays");
  plots->add_option("--grid", in.grids, "GRID3 file(s) to slice");
  plots->add_option("--altitudes", in.altitudes, "Slice altitudes, comma-separated");
  plots->add_option("--rejection", in.rejections, "Rejection curve CSV(s)");
  plots->add_option("--path", in.paths, "Path file(s) for the overlay");
  plots->add_option("--route", in.route_dir, "Route output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*build) return cmd_build_starmap(common, in, out);
    if (*infer) return cmd_infer_field(common, in, out);
    if (*route) return cmd_route(common, in, out);
    if (*path_cmds[0]) return cmd_clearance(common, in, out);
    if (*path_cmds[1]) return cmd_explain(common, in, out);
    if (*path_cmds[2]) return cmd_optimize(common, in, out);
    if (*plots) return cmd_export_plots(common, in, out, err);
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace aerolex::cli
