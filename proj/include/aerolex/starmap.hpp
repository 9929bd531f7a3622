#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aerolex/geo.hpp"
#include "aerolex/grid.hpp"

namespace aerolex::starmap {

struct PerturbationSigmas {
  double rotation = 0.0;     // radians
  double translation = 0.0;  // meters, per axis
};

/// Map error model: each feature is rotated about its centroid and translated
/// by independent Gaussian draws. Per-feature overrides replace both sigmas.
struct PerturbationModel {
  double rotation_sigma = 0.0;
  double translation_sigma = 3.0;
  int sample_count = 50;
  std::map<std::string, PerturbationSigmas> overrides;  // by feature id

  PerturbationSigmas sigmas_for(const std::string& feature_id) const;
  void check() const;
};

/// Derives the seed of the i-th sampled map from a base seed.
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index);

/// One perturbed copy of `map`; deterministic given the seed.
geo::FeatureMap sample_perturbed_map(const geo::FeatureMap& map, const PerturbationModel& model,
                                     std::uint64_t seed);

/// Inside or on the boundary of any polygon carrying `tag`.
bool eval_over(Vec2 point, const std::string& tag, const geo::FeatureMap& map);

/// Euclidean distance to the closest feature carrying `tag` (0 inside a
/// tagged polygon). Throws InputError if no feature carries the tag.
double eval_distance(Vec2 point, const std::string& tag, const geo::FeatureMap& map);

enum class RelationKind { over, distance };

std::string_view to_string(RelationKind kind);

struct LayerKey {
  RelationKind kind = RelationKind::over;
  std::string tag;

  friend auto operator<=>(const LayerKey&, const LayerKey&) = default;
};

/// Interpolated parameters of one relation at one point. For `over` only
/// `value` (Bernoulli p) is meaningful; for `distance` value = mean and
/// spread = standard deviation.
struct RelationParams {
  double value = 0.0;
  double spread = 0.0;
};

struct RelationLayer {
  RelationKind kind = RelationKind::over;
  std::string tag;
  GridSpec2D grid;
  std::vector<double> value;   // p or mean, per node
  std::vector<double> spread;  // stddev per node; empty for `over`
};

/// Bilinear interpolation of each parameter. Out of bounds throws InputError.
RelationParams interpolate_layer(const RelationLayer& layer, Vec2 point);

/// Draws n_M perturbed maps (seeds sample_seed(seed, i)) and fits one layer:
/// Bernoulli hit fraction for `over`, moment-matched Gaussian for `distance`.
RelationLayer fit_relation_layer(const geo::FeatureMap& map, const PerturbationModel& model,
                                 RelationKind kind, const std::string& tag,
                                 const GridSpec2D& grid, std::uint64_t seed);

class StarMap {
 public:
  StarMap() = default;
  StarMap(GridSpec2D grid, PerturbationModel model, std::uint64_t seed, std::string source);

  const GridSpec2D& grid() const { return grid_; }
  const PerturbationModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& source() const { return source_; }
  const std::map<LayerKey, RelationLayer>& layers() const { return layers_; }

  bool has_layer(RelationKind kind, const std::string& tag) const;
  /// Throws InputError if absent.
  const RelationLayer& layer(RelationKind kind, const std::string& tag) const;
  /// The layer's grid must equal this map's grid.
  void add_layer(RelationLayer layer);

 private:
  GridSpec2D grid_{};
  PerturbationModel model_{};
  std::uint64_t seed_ = 0;
  std::string source_;
  std::map<LayerKey, RelationLayer> layers_;
};

/// Fits every requested layer from one shared set of sampled maps.
StarMap build_star_map(const geo::FeatureMap& map, const PerturbationModel& model,
                       const std::vector<LayerKey>& relations, const GridSpec2D& grid,
                       std::uint64_t seed, std::string source = {});

/// Directory layout: manifest.json plus one GRID2 file per layer parameter.
void save_star_map(const StarMap& sm, const std::string& directory);
StarMap load_star_map(const std::string& directory);

}  // namespace aerolex::starmap
