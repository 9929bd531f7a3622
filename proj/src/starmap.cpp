#include "aerolex/starmap.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "aerolex/errors.hpp"
#include "aerolex/parallel.hpp"

namespace aerolex::starmap {

PerturbationSigmas PerturbationModel::sigmas_for(const std::string& feature_id) const {
  if (const auto it = overrides.find(feature_id); it != overrides.end()) return it->second;
  return {rotation_sigma, translation_sigma};
}

void PerturbationModel::check() const {
  auto bad = [](double s) { return !(s >= 0.0) || !std::isfinite(s); };
  if (bad(rotation_sigma) || bad(translation_sigma)) {
    throw InputError("perturbation sigmas must be finite and non-negative");
  }
  for (const auto& [id, s] : overrides) {
    if (bad(s.rotation) || bad(s.translation)) {
      throw InputError("perturbation override for '" + id + "' has a negative sigma");
    }
  }
  if (sample_count < 2) throw InputError("sample_count must be at least 2");
}

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

geo::FeatureMap sample_perturbed_map(const geo::FeatureMap& map, const PerturbationModel& model,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> standard(0.0, 1.0);
  std::vector<geo::GeoFeature> out = map.features();
  for (auto& f : out) {
    const auto sig = model.sigmas_for(f.id);
    // Always three draws per feature so streams stay aligned across sigmas.
    const double angle = sig.rotation * standard(rng);
    const Vec2 offset{sig.translation * standard(rng), sig.translation * standard(rng)};
    if (angle != 0.0) {
      const Vec2 c = f.centroid();
      const double cs = std::cos(angle), sn = std::sin(angle);
      for (auto& v : f.vertices) {
        const Vec2 d = v - c;
        v = Vec2{c.x + cs * d.x - sn * d.y, c.y + sn * d.x + cs * d.y};
      }
    }
    if (offset.x != 0.0 || offset.y != 0.0) {
      for (auto& v : f.vertices) v = v + offset;
    }
    if (f.kind == geo::GeometryKind::polygon) f.vertices.back() = f.vertices.front();
  }
  return geo::FeatureMap(map.origin(), map.bounds(), std::move(out));
}

namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double boundary_distance(Vec2 p, const std::vector<Vec2>& verts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < verts.size(); ++i) {
    best = std::min(best, segment_distance(p, verts[i - 1], verts[i]));
  }
  return best;
}

// Even-odd crossing test on a closed ring.
bool ring_contains(Vec2 p, const std::vector<Vec2>& ring) {
  bool inside = false;
  for (std::size_t i = 1; i < ring.size(); ++i) {
    const Vec2 a = ring[i - 1], b = ring[i];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

constexpr double kBoundaryTolerance = 1e-9;

bool polygon_covers(Vec2 p, const geo::GeoFeature& f) {
  return ring_contains(p, f.vertices) || boundary_distance(p, f.vertices) <= kBoundaryTolerance;
}

double feature_distance(Vec2 p, const geo::GeoFeature& f) {
  switch (f.kind) {
    case geo::GeometryKind::point:
      return distance(p, f.vertices.front());
    case geo::GeometryKind::polyline:
      return boundary_distance(p, f.vertices);
    case geo::GeometryKind::polygon:
      if (ring_contains(p, f.vertices)) return 0.0;
      return boundary_distance(p, f.vertices);
  }
  return std::numeric_limits<double>::infinity();
}

bool eval_over_features(Vec2 p, const std::vector<const geo::GeoFeature*>& tagged) {
  for (const auto* f : tagged) {
    if (f->kind == geo::GeometryKind::polygon && polygon_covers(p, *f)) return true;
  }
  return false;
}

double eval_distance_features(Vec2 p, const std::vector<const geo::GeoFeature*>& tagged) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto* f : tagged) best = std::min(best, feature_distance(p, *f));
  return best;
}

}  // namespace

bool eval_over(Vec2 point, const std::string& tag, const geo::FeatureMap& map) {
  return eval_over_features(point, map.features_with_tag(tag));
}

double eval_distance(Vec2 point, const std::string& tag, const geo::FeatureMap& map) {
  const auto tagged = map.features_with_tag(tag);
  if (tagged.empty()) throw InputError("tag has no features: '" + tag + "'");
  return eval_distance_features(point, tagged);
}

std::string_view to_string(RelationKind kind) {
  return kind == RelationKind::over ? "over" : "distance";
}

RelationParams interpolate_layer(const RelationLayer& layer, Vec2 point) {
  RelationParams out;
  out.value = bilinear(layer.grid, layer.value, point);
  if (!layer.spread.empty()) out.spread = bilinear(layer.grid, layer.spread, point);
  if (layer.kind == RelationKind::over) out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

namespace {

// Fits layers for all `keys` against the same list of sampled maps.
std::vector<RelationLayer> fit_layers(const std::vector<geo::FeatureMap>& samples,
                                      const std::vector<LayerKey>& keys, const GridSpec2D& grid) {
  std::vector<RelationLayer> layers;
  const double n = static_cast<double>(samples.size());
  for (const auto& key : keys) {
    RelationLayer layer;
    layer.kind = key.kind;
    layer.tag = key.tag;
    layer.grid = grid;
    layer.value.assign(grid.size(), 0.0);
    if (key.kind == RelationKind::distance) layer.spread.assign(grid.size(), 0.0);

    std::vector<std::vector<const geo::GeoFeature*>> tagged;
    tagged.reserve(samples.size());
    for (const auto& s : samples) {
      tagged.push_back(s.features_with_tag(key.tag));
      if (key.kind == RelationKind::distance && tagged.back().empty()) {
        throw InputError("tag has no features: '" + key.tag + "'");
      }
    }

    parallel_for(grid.size(), [&](std::size_t node) {
      const Vec2 p = grid.node(node);
      if (key.kind == RelationKind::over) {
        std::size_t hits = 0;
        for (const auto& t : tagged) hits += eval_over_features(p, t) ? 1 : 0;
        layer.value[node] = static_cast<double>(hits) / n;
      } else {
        // Welford's update keeps the variance accurate for near-constant samples.
        double mean = 0.0, m2 = 0.0, count = 0.0;
        for (const auto& t : tagged) {
          const double d = eval_distance_features(p, t);
          count += 1.0;
          const double delta = d - mean;
          mean += delta / count;
          m2 += delta * (d - mean);
        }
        layer.value[node] = std::max(0.0, mean);
        layer.spread[node] = std::sqrt(std::max(0.0, m2 / (count - 1.0)));
      }
    });
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::vector<geo::FeatureMap> draw_samples(const geo::FeatureMap& map,
                                          const PerturbationModel& model, std::uint64_t seed) {
  model.check();
  std::vector<geo::FeatureMap> samples(static_cast<std::size_t>(model.sample_count));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = sample_perturbed_map(map, model, sample_seed(seed, i));
  }
  return samples;
}

}  // namespace

RelationLayer fit_relation_layer(const geo::FeatureMap& map, const PerturbationModel& model,
                                 RelationKind kind, const std::string& tag,
                                 const GridSpec2D& grid, std::uint64_t seed) {
  grid.check();
  const auto samples = draw_samples(map, model, seed);
  return std::move(fit_layers(samples, {LayerKey{kind, tag}}, grid).front());
}

StarMap::StarMap(GridSpec2D grid, PerturbationModel model, std::uint64_t seed, std::string source)
    : grid_(grid), model_(std::move(model)), seed_(seed), source_(std::move(source)) {}

bool StarMap::has_layer(RelationKind kind, const std::string& tag) const {
  return layers_.count(LayerKey{kind, tag}) != 0;
}

const RelationLayer& StarMap::layer(RelationKind kind, const std::string& tag) const {
  const auto it = layers_.find(LayerKey{kind, tag});
  if (it == layers_.end()) {
    throw InputError("StaR map has no '" + std::string(to_string(kind)) + "' layer for tag '" +
                     tag + "'");
  }
  return it->second;
}

void StarMap::add_layer(RelationLayer layer) {
  if (!(layer.grid == grid_)) throw InputError("layer grid differs from the StaR map grid");
  LayerKey key{layer.kind, layer.tag};
  layers_[std::move(key)] = std::move(layer);
}

StarMap build_star_map(const geo::FeatureMap& map, const PerturbationModel& model,
                       const std::vector<LayerKey>& relations, const GridSpec2D& grid,
                       std::uint64_t seed, std::string source) {
  grid.check();
  const auto samples = draw_samples(map, model, seed);
  StarMap sm(grid, model, seed, std::move(source));
  for (auto& layer : fit_layers(samples, relations, grid)) sm.add_layer(std::move(layer));
  return sm;
}

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string layer_file(const LayerKey& key, const char* part) {
  return std::string(to_string(key.kind)) + "_" + key.tag + "." + part + ".grid";
}

void write_layer_part(const fs::path& path, const GridSpec2D& grid,
                      const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  write_grid2(out, grid, values);
}

std::vector<double> read_layer_part(const fs::path& path, const GridSpec2D& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open layer file '" + path.string() + "'");
  GridSpec2D spec;
  auto values = read_grid2(in, spec);
  if (!(spec == expected)) throw InputError("layer '" + path.string() + "' grid mismatch");
  return values;
}

}  // namespace

void save_star_map(const StarMap& sm, const std::string& directory) {
  const fs::path dir(directory);
  fs::create_directories(dir);
  ordered_json manifest;
  manifest["format"] = "aerolex-starmap-1";
  manifest["source"] = sm.source();
  manifest["seed"] = sm.seed();
  const auto& g = sm.grid();
  manifest["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"ox", g.ox},
                      {"oy", g.oy}, {"rx", g.rx}, {"ry", g.ry}};
  const auto& m = sm.model();
  ordered_json model = {{"rotation_sigma", m.rotation_sigma},
                        {"translation_sigma", m.translation_sigma},
                        {"sample_count", m.sample_count}};
  ordered_json overrides = ordered_json::object();
  for (const auto& [id, s] : m.overrides) {
    overrides[id] = {{"rotation_sigma", s.rotation}, {"translation_sigma", s.translation}};
  }
  model["overrides"] = overrides;
  manifest["model"] = model;
  ordered_json layers = ordered_json::array();
  for (const auto& [key, layer] : sm.layers()) {
    ordered_json entry = {{"kind", std::string(to_string(key.kind))}, {"tag", key.tag}};
    const std::string value_file = layer_file(key, key.kind == RelationKind::over ? "p" : "mean");
    write_layer_part(dir / value_file, layer.grid, layer.value);
    entry["value_file"] = value_file;
    if (key.kind == RelationKind::distance) {
      const std::string spread_file = layer_file(key, "std");
      write_layer_part(dir / spread_file, layer.grid, layer.spread);
      entry["spread_file"] = spread_file;
    }
    layers.push_back(entry);
  }
  manifest["layers"] = layers;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw InputError("cannot write StaR map manifest in '" + directory + "'");
  out << manifest.dump(2) << '\n';
}

StarMap load_star_map(const std::string& directory) {
  const fs::path dir(directory);
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw InputError("no StaR map manifest in '" + directory + "'");
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(in);
    const auto& g = manifest.at("grid");
    GridSpec2D grid{g.at("ox").get<double>(),      g.at("oy").get<double>(),
                    g.at("rx").get<double>(),      g.at("ry").get<double>(),
                    g.at("nx").get<std::size_t>(), g.at("ny").get<std::size_t>()};
    grid.check();
    const auto& jm = manifest.at("model");
    PerturbationModel model;
    model.rotation_sigma = jm.at("rotation_sigma").get<double>();
    model.translation_sigma = jm.at("translation_sigma").get<double>();
    model.sample_count = jm.at("sample_count").get<int>();
    const ordered_json overrides = jm.value("overrides", ordered_json::object());
    for (const auto& [id, s] : overrides.items()) {
      model.overrides[id] = {s.at("rotation_sigma").get<double>(),
                             s.at("translation_sigma").get<double>()};
    }
    StarMap sm(grid, model, manifest.at("seed").get<std::uint64_t>(),
               manifest.value("source", std::string{}));
    for (const auto& entry : manifest.at("layers")) {
      RelationLayer layer;
      const auto kind = entry.at("kind").get<std::string>();
      if (kind == "over") {
        layer.kind = RelationKind::over;
      } else if (kind == "distance") {
        layer.kind = RelationKind::distance;
      } else {
        throw InputError("unknown layer kind '" + kind + "'");
      }
      layer.tag = entry.at("tag").get<std::string>();
      layer.grid = grid;
      layer.value = read_layer_part(dir / entry.at("value_file").get<std::string>(), grid);
      if (layer.kind == RelationKind::distance) {
        layer.spread = read_layer_part(dir / entry.at("spread_file").get<std::string>(), grid);
      }
      sm.add_layer(std::move(layer));
    }
    return sm;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed StaR map manifest: " + std::string(e.what()));
  }
}

}  // namespace aerolex::starmap
