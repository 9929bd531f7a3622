#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aerolex/cola.hpp"
#include "aerolex/inference.hpp"
#include "aerolex/starmap.hpp"
#include "aerolex/vec.hpp"

namespace aerolex::mission {

using inference::MissionSetting;

struct ClearanceReport {
  double score = 0.0;
  double threshold = 0.0;
  bool granted = false;
  std::vector<double> probabilities;
};

using ProbabilityAt = std::function<double(Vec3)>;

/// Mean satisfaction probability over the waypoints; granted iff it exceeds
/// the threshold strictly.
ClearanceReport clearance(const Waypoints& path, const ProbabilityAt& prob_at, double threshold);
ClearanceReport clearance_from_probabilities(std::vector<double> probabilities, double threshold);

/// Thread-safe cache of P(compliance | point) per setting.
class ProbabilityMemo {
 public:
  ProbabilityMemo(const cola::Constitution& c, const starmap::StarMap& sm,
                  inference::InferenceOptions options = {});
  double operator()(const MissionSetting& setting, Vec3 p);
  std::size_t size() const;

 private:
  struct Key {
    std::string setting;
    double x, y, z;
    auto operator<=>(const Key&) const = default;
  };
  const cola::Constitution& c_;
  const starmap::StarMap& sm_;
  inference::InferenceOptions options_;
  mutable std::mutex mutex_;
  std::map<Key, double> cache_;
};

/// Option names to restrict to. A group none of whose options is listed
/// stays unrestricted.
using AllowedOptions = std::vector<std::string>;

/// Display label of a parameter group: its options joined by '/'.
std::string group_label(const cola::ParameterGroup& g);

/// Cartesian product of the (allowed) options, first group varying slowest,
/// options in declaration order. Throws ResourceError above `limit`.
std::vector<MissionSetting> enumerate_settings(const cola::Constitution& c,
                                               const AllowedOptions& allowed = {},
                                               std::size_t limit = 64);

struct SettingScore {
  MissionSetting setting;
  double score = 0.0;
  bool granted = false;
};

struct GroupImpact {
  std::string group;
  double impact = 0.0;
};

struct ExplanationReport {
  std::vector<std::string> groups;
  std::vector<SettingScore> scores;   // descending score, enumeration order on ties
  std::vector<GroupImpact> impacts;   // one per group, declaration order
  double threshold = 0.0;
};

struct ExplainOptions {
  double threshold = 0.5;
  std::size_t max_settings = 64;
  AllowedOptions allowed;
  inference::InferenceOptions inference;
};

using SettingScorer = std::function<double(const MissionSetting&)>;

/// Scores every setting with `score` and derives the per-group impacts.
ExplanationReport explain_with(const cola::Constitution& c, const SettingScorer& score,
                               const ExplainOptions& options = {});

ExplanationReport explain(const cola::Constitution& c, const starmap::StarMap& sm,
                          const Waypoints& path, const ExplainOptions& options = {});
ExplanationReport explain(const cola::Constitution& c, ProbabilityMemo& memo,
                          const Waypoints& path, const ExplainOptions& options = {});

struct OptimizationResult {
  MissionSetting setting;
  double score = 0.0;
};

/// Argmax of the clearance score; ties go to the earlier setting in
/// enumeration (declaration) order.
OptimizationResult optimize_setting_with(const cola::Constitution& c, const SettingScorer& score,
                                         const ExplainOptions& options = {});
OptimizationResult optimize_setting(const cola::Constitution& c, const starmap::StarMap& sm,
                                    const Waypoints& path, const ExplainOptions& options = {});

struct RejectionCurve {
  std::vector<double> thresholds;
  std::vector<double> rates;  // fraction of scores strictly below each threshold
  double area = 0.0;          // trapezoidal integral over [0, 1]
};

RejectionCurve rejection_area(const std::vector<double>& scores, std::size_t samples = 1001);

std::string explanation_table(const ExplanationReport& report);
std::string explanation_csv(const ExplanationReport& report);
std::string rejection_csv(const RejectionCurve& curve);
/// Parses the two-column CSV written by rejection_csv.
RejectionCurve read_rejection_csv(const std::string& text);

}  // namespace aerolex::mission
