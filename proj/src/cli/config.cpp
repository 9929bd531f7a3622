#include "aerolex/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "aerolex/errors.hpp"

namespace aerolex {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InputError("expected a number");
  return out;
}

template <typename T>
T to_unsigned(const std::string& v) {
  T out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw InputError("expected a non-negative integer");
  }
  return out;
}

int to_int(const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InputError("expected an integer");
  return out;
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const MissionConfig&)> get;
  std::function<void(MissionConfig&, const std::string&)> set;
};

#define AEROLEX_DOUBLE(name, member)                                         \
  Field {                                                                    \
    name, [](const MissionConfig& c) { return format_double(c.member); },    \
        [](MissionConfig& c, const std::string& v) { c.member = to_double(v); } \
  }
#define AEROLEX_SIZE(name, member)                                                \
  Field {                                                                         \
    name, [](const MissionConfig& c) { return std::to_string(c.member); },        \
        [](MissionConfig& c, const std::string& v) {                              \
          c.member = to_unsigned<decltype(c.member)>(v);                          \
        }                                                                         \
  }
#define AEROLEX_INT(name, member)                                              \
  Field {                                                                      \
    name, [](const MissionConfig& c) { return std::to_string(c.member); },     \
        [](MissionConfig& c, const std::string& v) { c.member = to_int(v); }   \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      AEROLEX_DOUBLE("origin_lat", origin.lat),
      AEROLEX_DOUBLE("origin_lon", origin.lon),
      AEROLEX_DOUBLE("x_min", bounds.x_min),
      AEROLEX_DOUBLE("x_max", bounds.x_max),
      AEROLEX_DOUBLE("y_min", bounds.y_min),
      AEROLEX_DOUBLE("y_max", bounds.y_max),
      AEROLEX_DOUBLE("z_min", bounds.z_min),
      AEROLEX_DOUBLE("z_max", bounds.z_max),
      AEROLEX_DOUBLE("x_res", resolution.x),
      AEROLEX_DOUBLE("y_res", resolution.y),
      AEROLEX_DOUBLE("z_res", resolution.z),
      AEROLEX_DOUBLE("starmap_resolution", starmap_resolution),
      AEROLEX_DOUBLE("rotation_sigma", rotation_sigma),
      AEROLEX_DOUBLE("translation_sigma", translation_sigma),
      AEROLEX_INT("map_samples", map_samples),
      AEROLEX_DOUBLE("uav_mass", uav.mass),
      AEROLEX_DOUBLE("cruise_velocity", uav.cruise_velocity),
      AEROLEX_DOUBLE("energy_coefficient", uav.energy_coefficient),
      AEROLEX_DOUBLE("radio_cell_height", radio.cell_height),
      AEROLEX_DOUBLE("radio_d0", radio.d0),
      AEROLEX_DOUBLE("radio_mu", radio.mu),
      Field{"radio_tower_tag", [](const MissionConfig& c) { return c.radio_tower_tag; },
            [](MissionConfig& c, const std::string& v) { c.radio_tower_tag = v; }},
      AEROLEX_INT("degree", degree),
      AEROLEX_DOUBLE("waypoint_resolution", waypoint_resolution),
      AEROLEX_DOUBLE("nurbs_epsilon", nurbs_epsilon),
      AEROLEX_DOUBLE("mutation_sigma", mutation_sigma),
      AEROLEX_DOUBLE("mutation_probability", mutation_probability),
      AEROLEX_DOUBLE("gene_mutation_probability", gene_mutation_probability),
      AEROLEX_DOUBLE("crossover_probability", crossover_probability),
      AEROLEX_SIZE("individuals", individuals),
      AEROLEX_SIZE("weighted_solutions", weighted_solutions),
      AEROLEX_SIZE("generations", generations),
      AEROLEX_DOUBLE("clearance_threshold", clearance_threshold),
      Field{"setting", [](const MissionConfig& c) { return join(c.setting); },
            [](MissionConfig& c, const std::string& v) { c.setting = to_list(v); }},
      Field{"allowed", [](const MissionConfig& c) { return join(c.allowed); },
            [](MissionConfig& c, const std::string& v) { c.allowed = to_list(v); }},
      AEROLEX_SIZE("seed", seed),
      AEROLEX_SIZE("threads", threads),
      AEROLEX_INT("max_bits", max_bits),
      AEROLEX_SIZE("explain_limit", explain_limit),
      AEROLEX_SIZE("rejection_samples", rejection_samples),
  };
  return table;
}

#undef AEROLEX_DOUBLE
#undef AEROLEX_SIZE
#undef AEROLEX_INT

}  // namespace

GridSpec3D MissionConfig::navigation_grid() const {
  return GridSpec3D::from_bounds({bounds.x_min, bounds.y_min, bounds.z_min},
                                 {bounds.x_max, bounds.y_max, bounds.z_max}, resolution);
}

GridSpec2D MissionConfig::starmap_grid() const {
  GridSpec2D g;
  g.ox = bounds.x_min;
  g.oy = bounds.y_min;
  g.rx = g.ry = starmap_resolution;
  g.nx = static_cast<std::size_t>(std::floor((bounds.x_max - bounds.x_min) / starmap_resolution)) + 1;
  g.ny = static_cast<std::size_t>(std::floor((bounds.y_max - bounds.y_min) / starmap_resolution)) + 1;
  return g;
}

starmap::PerturbationModel MissionConfig::perturbation() const {
  starmap::PerturbationModel m;
  m.rotation_sigma = rotation_sigma;
  m.translation_sigma = translation_sigma;
  m.sample_count = map_samples;
  return m;
}

double MissionConfig::effective_nurbs_epsilon() const {
  if (nurbs_epsilon > 0.0) return nurbs_epsilon;
  return 2.0 * std::max({resolution.x, resolution.y, resolution.z});
}

router::Box MissionConfig::box() const {
  return {{bounds.x_min, bounds.y_min, bounds.z_min}, {bounds.x_max, bounds.y_max, bounds.z_max}};
}

void MissionConfig::check() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InputError("config: " + what);
  };
  require(origin.lat >= -90.0 && origin.lat <= 90.0, "origin_lat must lie in [-90, 90]");
  require(origin.lon >= -180.0 && origin.lon <= 180.0, "origin_lon must lie in [-180, 180]");
  require(bounds.x_min < bounds.x_max && bounds.y_min < bounds.y_max && bounds.z_min < bounds.z_max,
          "bounds must satisfy min < max on every axis");
  require(resolution.x > 0.0 && resolution.y > 0.0 && resolution.z > 0.0,
          "resolutions must be positive");
  require(starmap_resolution > 0.0, "starmap_resolution must be positive");
  require(rotation_sigma >= 0.0 && translation_sigma >= 0.0, "perturbation sigmas must be >= 0");
  require(map_samples >= 2, "map_samples must be at least 2");
  require(uav.mass > 0.0 && uav.cruise_velocity > 0.0 && uav.energy_coefficient >= 0.0,
          "UAV parameters must be positive");
  require(radio.d0 < 0.0, "radio_d0 must be negative");
  require(radio.mu > 0.0, "radio_mu must be positive");
  require(degree >= 1, "degree must be at least 1");
  require(waypoint_resolution > 0.0, "waypoint_resolution must be positive");
  require(nurbs_epsilon >= 0.0, "nurbs_epsilon must be >= 0");
  require(mutation_sigma >= 0.0, "mutation_sigma must be >= 0");
  require(mutation_probability >= 0.0 && mutation_probability <= 1.0,
          "mutation_probability must lie in [0, 1]");
  require(gene_mutation_probability >= 0.0 && gene_mutation_probability <= 1.0,
          "gene_mutation_probability must lie in [0, 1]");
  require(crossover_probability >= 0.0 && crossover_probability <= 1.0,
          "crossover_probability must lie in [0, 1]");
  require(individuals >= 2, "individuals must be at least 2");
  require(weighted_solutions >= 1, "weighted_solutions must be at least 1");
  require(clearance_threshold >= 0.0 && clearance_threshold <= 1.0,
          "clearance_threshold must lie in [0, 1]");
  require(max_bits >= 1 && max_bits <= 62, "max_bits must lie in [1, 62]");
  require(explain_limit >= 1, "explain_limit must be at least 1");
  require(rejection_samples >= 2, "rejection_samples must be at least 2");
}

MissionConfig parse_config(const std::string& text) {
  MissionConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(number);
    if (eq == std::string::npos) throw InputError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("model.", 0) == 0 && key.size() > 6) {
      if (value.empty()) throw InputError(where + ": empty model binding");
      c.models[key.substr(6)] = value;
      continue;
    }
    const auto& table = fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw InputError(where + ": unknown key '" + key + "'");
    try {
      it->set(c, value);
    } catch (const InputError& e) {
      throw InputError(where + ": " + key + ": " + e.what());
    }
  }
  c.check();
  return c;
}

MissionConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string to_text(const MissionConfig& c) {
  std::ostringstream out;
  for (const auto& f : fields()) out << f.key << " = " << f.get(c) << "\n";
  for (const auto& [name, model] : c.models) out << "model." << name << " = " << model << "\n";
  return out.str();
}

}  // namespace aerolex
