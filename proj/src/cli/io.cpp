#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aerolex/errors.hpp"
#include "internal.hpp"

namespace aerolex::cli {

using nlohmann::json;

std::string read_text(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open '" + file + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write '" + file + "'");
  out << text;
}

std::string path_geojson(const PathRecord& path, const geo::LatLon& origin) {
  json coords = json::array();
  json local = json::array();
  json altitude = json::array();
  for (const Vec3& p : path.waypoints) {
    const geo::LatLon g = geo::unproject_to_geographic(p.xy(), origin);
    coords.push_back({g.lon, g.lat, p.z});
    local.push_back({p.x, p.y, p.z});
    altitude.push_back(p.z);
  }
  json objectives = json::object();
  for (const auto& [name, value] : path.objectives) {
    objectives[name] = std::isfinite(value) ? json(value) : json(nullptr);
  }
  json feature = {
      {"type", "Feature"},
      {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
      {"properties",
       {{"member", path.member},
        {"score", path.score},
        {"granted", path.granted},
        {"roles", path.roles},
        {"objectives", objectives},
        {"altitude", altitude},
        {"clearance", path.clearance},
        {"local_coordinates", local}}},
  };
  json doc = {{"type", "FeatureCollection"},
              {"origin", {origin.lat, origin.lon}},
              {"features", json::array({feature})}};
  return doc.dump(1) + "\n";
}

namespace {

PathRecord read_geojson_path(const std::string& text, const geo::LatLon& fallback) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("path file is not valid JSON: ") + e.what());
  }
  geo::LatLon origin = fallback;
  if (doc.contains("origin")) {
    const auto& o = doc["origin"];
    if (!o.is_array() || o.size() != 2) throw InputError("path file: origin must be [lat, lon]");
    origin = {o[0].get<double>(), o[1].get<double>()};
  }
  const json* feature = &doc;
  if (doc.value("type", "") == "FeatureCollection") {
    if (!doc.contains("features") || doc["features"].empty()) {
      throw InputError("path file holds no features");
    }
    feature = &doc["features"][0];
  }
  const json& geom = feature->contains("geometry") ? (*feature)["geometry"] : *feature;
  if (geom.value("type", "") != "LineString") throw InputError("path file: expected a LineString");
  PathRecord r;
  const json props = feature->value("properties", json::object());
  try {
    if (props.contains("local_coordinates")) {
      for (const auto& p : props["local_coordinates"]) {
        r.waypoints.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      }
    } else {
      for (const auto& p : geom.at("coordinates")) {
        const Vec2 xy = geo::project_to_local({p.at(1).get<double>(), p.at(0).get<double>()}, origin);
        const double z = p.size() > 2 ? p.at(2).get<double>() : 0.0;
        r.waypoints.push_back({xy.x, xy.y, z});
      }
    }
    r.member = props.value("member", std::size_t{0});
    r.score = props.value("score", 0.0);
    r.granted = props.value("granted", false);
    if (props.contains("clearance")) r.clearance = props["clearance"].get<std::vector<double>>();
    if (props.contains("roles")) r.roles = props["roles"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("path file: malformed coordinates: ") + e.what());
  }
  if (r.waypoints.empty()) throw InputError("path file holds no waypoints");
  return r;
}

PathRecord read_csv_path(const std::string& text) {
  PathRecord r;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (row == 1 && line.find_first_of("xyzXYZ") != std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    Vec3 p;
    if (!(fields >> p.x >> p.y >> p.z)) {
      throw InputError("path CSV row " + std::to_string(row) + ": expected x,y,z");
    }
    r.waypoints.push_back(p);
  }
  if (r.waypoints.empty()) throw InputError("path file holds no waypoints");
  return r;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

PathRecord read_path_file(const std::string& file, const geo::LatLon& fallback_origin) {
  if (ends_with(file, ".geojson") || ends_with(file, ".json")) {
    return read_geojson_path(read_text(file), fallback_origin);
  }
  if (ends_with(file, ".csv")) return read_csv_path(read_text(file));
  throw InputError("unknown path file format '" + file + "' (expected .geojson, .json or .csv)");
}

}  // namespace aerolex::cli
