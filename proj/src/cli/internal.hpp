#pragma once

#include <map>
#include <string>
#include <vector>

#include "aerolex/config.hpp"
#include "aerolex/grid.hpp"
#include "aerolex/vec.hpp"

namespace aerolex::cli {

struct PathRecord {
  std::size_t member = 0;
  Waypoints waypoints;
  std::vector<double> clearance;  // per waypoint
  double score = 0.0;
  bool granted = false;
  std::vector<std::pair<std::string, double>> objectives;
  std::vector<std::string> roles;  // "knee", "extreme:<objective>"
};

std::string path_geojson(const PathRecord& path, const geo::LatLon& origin);

/// Reads a path file: GeoJSON LineString ([lon, lat, alt]) or CSV x,y,z in
/// local meters. Throws InputError on unknown formats.
PathRecord read_path_file(const std::string& file, const geo::LatLon& fallback_origin);

std::string read_text(const std::string& file);
void write_text(const std::string& file, const std::string& text);

/// Binary PPM heatmap of one horizontal slice; north is up.
std::string slice_ppm(const ScalarGrid3D& grid, double altitude);

struct CurveSeries {
  std::string label;
  std::vector<double> x, y;
};

std::string curves_svg(const std::vector<CurveSeries>& series, const std::string& x_label,
                       const std::string& y_label);

/// Top-down path overlay; paths with score >= threshold are blue, others red.
std::string overlay_svg(const std::vector<PathRecord>& paths, const geo::Bounds& bounds,
                        double threshold);

}  // namespace aerolex::cli
