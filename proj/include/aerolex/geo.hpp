#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aerolex/vec.hpp"

namespace aerolex::geo {

/// Mean Earth radius used by the local projection.
inline constexpr double kEarthRadius = 6371000.0;

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

/// Equirectangular projection about `origin`: x = east, y = north, meters.
Vec2 project_to_local(LatLon point, LatLon origin);

/// Inverse of project_to_local.
LatLon unproject_to_geographic(Vec2 local, LatLon origin);

enum class GeometryKind { point, polyline, polygon };

std::string_view to_string(GeometryKind kind);

/// True for non-empty identifiers matching [a-z][a-z0-9_]*.
bool is_valid_identifier(std::string_view s);

struct GeoFeature {
  std::string id;
  GeometryKind kind = GeometryKind::point;
  /// Local meters. Polygons are closed (front() == back()).
  std::vector<Vec2> vertices;
  std::set<std::string> tags;

  bool has_tag(const std::string& tag) const { return tags.count(tag) != 0; }

  /// Mean of the distinct vertices (closing vertex of a polygon excluded).
  Vec2 centroid() const;

  /// Throws InputError if the vertex count or tags violate the geometry rules.
  void check() const;
};

struct Bounds {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  double z_min = 0.0, z_max = 0.0;

  bool contains_xy(Vec2 p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

/// Tagged features in a local metric frame. Immutable after construction.
class FeatureMap {
 public:
  FeatureMap() = default;
  /// Validates every feature and orders them by id. Duplicate ids throw.
  FeatureMap(LatLon origin, Bounds bounds, std::vector<GeoFeature> features);

  LatLon origin() const { return origin_; }
  const Bounds& bounds() const { return bounds_; }
  const std::vector<GeoFeature>& features() const { return features_; }

  std::set<std::string> tags() const;

  /// Features carrying `tag`, ordered by id. Unknown tags give an empty list.
  std::vector<const GeoFeature*> features_with_tag(const std::string& tag) const;

 private:
  LatLon origin_{};
  Bounds bounds_{};
  std::vector<GeoFeature> features_;
};

/// Clips a feature to the horizontal extent of `bounds`. Polylines may split
/// into several pieces (ids suffixed "#k"); fully outside features vanish.
std::vector<GeoFeature> clip_to_bounds(const GeoFeature& feature, const Bounds& bounds);

struct GeoJsonLoad {
  FeatureMap map;
  /// Features dropped because their `tags` array was missing or empty.
  std::size_t dropped_untagged = 0;
  /// Features dropped because they lay entirely outside the bounds.
  std::size_t dropped_outside = 0;
};

/// Parses a GeoJSON FeatureCollection carrying a top-level `origin: [lat, lon]`
/// and per-feature `properties.tags`. Bounds come from `clip` if given, else
/// from a top-level `bounds: [xmin, xmax, ymin, ymax, zmin, zmax]`, else from
/// the features' extent. Errors are InputError naming the feature index.
GeoJsonLoad load_geojson(std::string_view text, std::optional<Bounds> clip = std::nullopt);

GeoJsonLoad load_geojson_file(const std::string& path, std::optional<Bounds> clip = std::nullopt);

}  // namespace aerolex::geo
