#include "aerolex/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "aerolex/errors.hpp"

namespace aerolex::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_lat_lon(LatLon p, const char* what) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || std::abs(p.lat) > 90.0 ||
      std::abs(p.lon) > 180.0) {
    std::ostringstream os;
    os << what << " out of range: (" << p.lat << ", " << p.lon << ")";
    throw InputError(os.str());
  }
}

}  // namespace

Vec2 project_to_local(LatLon point, LatLon origin) {
  check_lat_lon(point, "coordinate");
  check_lat_lon(origin, "origin");
  const double scale_x = kEarthRadius * std::cos(origin.lat * kDegToRad);
  return {scale_x * (point.lon - origin.lon) * kDegToRad,
          kEarthRadius * (point.lat - origin.lat) * kDegToRad};
}

LatLon unproject_to_geographic(Vec2 local, LatLon origin) {
  check_lat_lon(origin, "origin");
  const double scale_x = kEarthRadius * std::cos(origin.lat * kDegToRad);
  return {origin.lat + local.y / kEarthRadius / kDegToRad,
          origin.lon + local.x / scale_x / kDegToRad};
}

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::point: return "point";
    case GeometryKind::polyline: return "polyline";
    case GeometryKind::polygon: return "polygon";
  }
  return "?";
}

bool is_valid_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

Vec2 GeoFeature::centroid() const {
  std::size_t n = vertices.size();
  if (kind == GeometryKind::polygon && n > 1) --n;
  Vec2 sum{};
  for (std::size_t i = 0; i < n; ++i) sum = sum + vertices[i];
  return n == 0 ? sum : (1.0 / static_cast<double>(n)) * sum;
}

void GeoFeature::check() const {
  const auto fail = [&](const std::string& msg) {
    throw InputError("feature '" + id + "': " + msg);
  };
  switch (kind) {
    case GeometryKind::point:
      if (vertices.size() != 1) fail("a point needs exactly 1 vertex");
      break;
    case GeometryKind::polyline:
      if (vertices.size() < 2) fail("a polyline needs at least 2 vertices");
      break;
    case GeometryKind::polygon:
      if (vertices.size() < 4) fail("a polygon needs at least 4 vertices");
      if (!(vertices.front() == vertices.back())) fail("polygon ring is not closed");
      break;
  }
  for (const auto& t : tags) {
    if (!is_valid_identifier(t)) fail("invalid tag '" + t + "'");
  }
}

FeatureMap::FeatureMap(LatLon origin, Bounds bounds, std::vector<GeoFeature> features)
    : origin_(origin), bounds_(bounds), features_(std::move(features)) {
  for (const auto& f : features_) f.check();
  std::stable_sort(features_.begin(), features_.end(),
                   [](const GeoFeature& a, const GeoFeature& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < features_.size(); ++i) {
    if (features_[i].id == features_[i - 1].id) {
      throw InputError("duplicate feature id '" + features_[i].id + "'");
    }
  }
}

std::set<std::string> FeatureMap::tags() const {
  std::set<std::string> out;
  for (const auto& f : features_) out.insert(f.tags.begin(), f.tags.end());
  return out;
}

std::vector<const GeoFeature*> FeatureMap::features_with_tag(const std::string& tag) const {
  std::vector<const GeoFeature*> out;
  for (const auto& f : features_) {
    if (f.has_tag(tag)) out.push_back(&f);
  }
  return out;
}

namespace {

// Sutherland-Hodgman against one half-plane given by inside(p) and the
// intersection of segment (a, b) with its boundary.
template <typename Inside, typename Cut>
std::vector<Vec2> clip_ring(const std::vector<Vec2>& ring, Inside inside, Cut cut) {
  std::vector<Vec2> out;
  if (ring.empty()) return out;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2 cur = ring[i];
    const Vec2 prev = ring[(i + ring.size() - 1) % ring.size()];
    const bool cur_in = inside(cur);
    const bool prev_in = inside(prev);
    if (cur_in) {
      if (!prev_in) out.push_back(cut(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(cut(prev, cur));
    }
  }
  return out;
}

std::vector<Vec2> clip_polygon(std::vector<Vec2> ring, const Bounds& b) {
  ring.pop_back();  // open the ring
  auto at_x = [](double x) {
    return [x](Vec2 p, Vec2 q) {
      const double t = (x - p.x) / (q.x - p.x);
      return Vec2{x, p.y + t * (q.y - p.y)};
    };
  };
  auto at_y = [](double y) {
    return [y](Vec2 p, Vec2 q) {
      const double t = (y - p.y) / (q.y - p.y);
      return Vec2{p.x + t * (q.x - p.x), y};
    };
  };
  ring = clip_ring(ring, [&](Vec2 p) { return p.x >= b.x_min; }, at_x(b.x_min));
  ring = clip_ring(ring, [&](Vec2 p) { return p.x <= b.x_max; }, at_x(b.x_max));
  ring = clip_ring(ring, [&](Vec2 p) { return p.y >= b.y_min; }, at_y(b.y_min));
  ring = clip_ring(ring, [&](Vec2 p) { return p.y <= b.y_max; }, at_y(b.y_max));
  if (ring.size() < 3) return {};
  ring.push_back(ring.front());
  return ring;
}

// Liang-Barsky; returns false if the segment misses the box.
bool clip_segment(Vec2& a, Vec2& b, const Bounds& box) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - box.x_min, box.x_max - a.x, a.y - box.y_min, box.y_max - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const Vec2 a0 = a;
  if (t0 > 0.0) a = Vec2{a0.x + t0 * dx, a0.y + t0 * dy};
  if (t1 < 1.0) b = Vec2{a0.x + t1 * dx, a0.y + t1 * dy};
  return true;
}

}  // namespace

std::vector<GeoFeature> clip_to_bounds(const GeoFeature& feature, const Bounds& bounds) {
  const bool all_inside = std::all_of(feature.vertices.begin(), feature.vertices.end(),
                                      [&](Vec2 p) { return bounds.contains_xy(p); });
  if (all_inside) return {feature};

  switch (feature.kind) {
    case GeometryKind::point:
      return {};
    case GeometryKind::polygon: {
      auto ring = clip_polygon(feature.vertices, bounds);
      if (ring.size() < 4) return {};
      GeoFeature out = feature;
      out.vertices = std::move(ring);
      return {out};
    }
    case GeometryKind::polyline: {
      std::vector<GeoFeature> pieces;
      std::vector<Vec2> current;
      auto flush = [&] {
        if (current.size() >= 2) {
          GeoFeature piece = feature;
          piece.id = feature.id + "#" + std::to_string(pieces.size());
          piece.vertices = current;
          pieces.push_back(std::move(piece));
        }
        current.clear();
      };
      for (std::size_t i = 1; i < feature.vertices.size(); ++i) {
        Vec2 a = feature.vertices[i - 1], b = feature.vertices[i];
        if (!clip_segment(a, b, bounds)) {
          flush();
          continue;
        }
        if (!current.empty() && !(current.back() == a)) flush();
        if (current.empty()) current.push_back(a);
        if (!(b == current.back())) current.push_back(b);
        if (!(b == feature.vertices[i])) flush();
      }
      flush();
      if (pieces.size() == 1) pieces.front().id = feature.id;
      return pieces;
    }
  }
  return {};
}

namespace {

using nlohmann::json;

LatLon read_position(const json& pos, const std::string& where) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw InputError(where + ": position must be [lon, lat]");
  }
  return {pos[1].get<double>(), pos[0].get<double>()};
}

}  // namespace

GeoJsonLoad load_geojson(std::string_view text, std::optional<Bounds> clip) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    throw InputError("GeoJSON document is not a FeatureCollection");
  }
  const auto origin_it = doc.find("origin");
  if (origin_it == doc.end() || !origin_it->is_array() || origin_it->size() != 2 ||
      !(*origin_it)[0].is_number() || !(*origin_it)[1].is_number()) {
    throw InputError("GeoJSON FeatureCollection lacks an 'origin: [lat, lon]' property");
  }
  const LatLon origin{(*origin_it)[0].get<double>(), (*origin_it)[1].get<double>()};
  check_lat_lon(origin, "origin");

  if (!clip) {
    if (const auto b = doc.find("bounds"); b != doc.end()) {
      if (!b->is_array() || b->size() != 6) {
        throw InputError("'bounds' must be [xmin, xmax, ymin, ymax, zmin, zmax]");
      }
      const auto v = b->get<std::vector<double>>();
      clip = Bounds{v[0], v[1], v[2], v[3], v[4], v[5]};
    }
  }

  const auto features_it = doc.find("features");
  if (features_it == doc.end() || !features_it->is_array()) {
    throw InputError("GeoJSON FeatureCollection lacks a 'features' array");
  }

  GeoJsonLoad result;
  std::vector<GeoFeature> features;
  std::size_t index = 0;
  for (const auto& f : *features_it) {
    const std::string where = "feature " + std::to_string(index);
    if (!f.is_object()) throw InputError(where + ": not an object");
    const json props = f.value("properties", json::object());
    const auto tags_it = props.find("tags");
    if (tags_it == props.end() || (tags_it->is_array() && tags_it->empty())) {
      ++result.dropped_untagged;
      ++index;
      continue;
    }
    if (!tags_it->is_array()) throw InputError(where + ": 'tags' must be an array of strings");

    GeoFeature feature;
    if (const auto id = f.find("id"); id != f.end()) {
      feature.id = id->is_string() ? id->get<std::string>() : id->dump();
    } else if (props.contains("id")) {
      const auto& pid = props["id"];
      feature.id = pid.is_string() ? pid.get<std::string>() : pid.dump();
    } else {
      feature.id = "f" + std::to_string(index);
    }
    for (const auto& t : *tags_it) {
      if (!t.is_string() || !is_valid_identifier(t.get<std::string>())) {
        throw InputError(where + " ('" + feature.id + "'): invalid tag " + t.dump());
      }
      feature.tags.insert(t.get<std::string>());
    }

    const auto geom_it = f.find("geometry");
    if (geom_it == f.end() || !geom_it->is_object()) {
      throw InputError(where + " ('" + feature.id + "'): missing geometry");
    }
    const std::string type = geom_it->value("type", "");
    const auto coords_it = geom_it->find("coordinates");
    if (coords_it == geom_it->end()) {
      throw InputError(where + " ('" + feature.id + "'): geometry lacks coordinates");
    }
    const json& coords = *coords_it;
    auto to_local = [&](const json& pos) {
      try {
        return project_to_local(read_position(pos, where), origin);
      } catch (const InputError& e) {
        throw InputError(where + " ('" + feature.id + "'): " + e.what());
      }
    };
    if (type == "Point") {
      feature.kind = GeometryKind::point;
      feature.vertices.push_back(to_local(coords));
    } else if (type == "LineString") {
      feature.kind = GeometryKind::polyline;
      if (!coords.is_array()) throw InputError(where + ": LineString coordinates must be an array");
      for (const auto& pos : coords) feature.vertices.push_back(to_local(pos));
    } else if (type == "Polygon") {
      feature.kind = GeometryKind::polygon;
      if (!coords.is_array() || coords.empty() || !coords[0].is_array()) {
        throw InputError(where + ": Polygon needs at least one ring");
      }
      // Only the outer ring is used.
      for (const auto& pos : coords[0]) feature.vertices.push_back(to_local(pos));
    } else {
      throw InputError(where + " ('" + feature.id + "'): unsupported geometry type '" + type +
                       "'");
    }
    try {
      feature.check();
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    features.push_back(std::move(feature));
    ++index;
  }

  Bounds bounds;
  if (clip) {
    bounds = *clip;
    std::vector<GeoFeature> clipped;
    for (const auto& f : features) {
      auto pieces = clip_to_bounds(f, bounds);
      if (pieces.empty()) ++result.dropped_outside;
      for (auto& p : pieces) clipped.push_back(std::move(p));
    }
    features = std::move(clipped);
  } else if (!features.empty()) {
    bounds.x_min = bounds.y_min = std::numeric_limits<double>::infinity();
    bounds.x_max = bounds.y_max = -std::numeric_limits<double>::infinity();
    for (const auto& f : features) {
      for (const auto& v : f.vertices) {
        bounds.x_min = std::min(bounds.x_min, v.x);
        bounds.x_max = std::max(bounds.x_max, v.x);
        bounds.y_min = std::min(bounds.y_min, v.y);
        bounds.y_max = std::max(bounds.y_max, v.y);
      }
    }
  }
  result.map = FeatureMap(origin, bounds, std::move(features));
  return result;
}

GeoJsonLoad load_geojson_file(const std::string& path, std::optional<Bounds> clip) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open map file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_geojson(ss.str(), clip);
}

}  // namespace aerolex::geo
