#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aerolex/cola.hpp"
#include "aerolex/grid.hpp"
#include "aerolex/starmap.hpp"
#include "aerolex/vec.hpp"

namespace aerolex::inference {

/// One chosen option per parameter group, in group declaration order.
struct MissionSetting {
  std::vector<std::string> choices;

  friend bool operator==(const MissionSetting&, const MissionSetting&) = default;
  friend auto operator<=>(const MissionSetting&, const MissionSetting&) = default;
};

/// First option of every group.
MissionSetting default_setting(const cola::Constitution& c);

/// Builds a setting from option names in any order; throws InputError unless
/// exactly one option of every group is named.
MissionSetting make_setting(const cola::Constitution& c, const std::vector<std::string>& options);

void check_setting(const cola::Constitution& c, const MissionSetting& s);

std::string to_string(const MissionSetting& s);

/// Standard normal CDF evaluated through erfc so both tails stay accurate.
double normal_cdf(double x, double mean, double stddev);

/// Masses of the intervals (-inf, c1), (c1, c2), ..., (ck, inf).
std::vector<double> interval_masses(double mean, double stddev, const std::vector<double>& cuts);

struct BernoulliFact {
  std::string name;
  double probability = 0.0;
};

/// A continuous term discretized at its cut points.
struct IntervalVariable {
  std::string name;
  std::vector<double> cuts;    // strictly increasing
  std::vector<double> masses;  // cuts.size() + 1 entries, summing to 1
};

enum class NodeKind { constant, fact, interval, defined, conjunction, disjunction, negation };

struct GroundFormula {
  NodeKind kind = NodeKind::constant;
  bool value = false;              // constant
  std::size_t index = 0;           // fact, interval variable, or earlier definition
  std::vector<bool> accepted;      // interval: which intervals satisfy the literal
  std::vector<GroundFormula> children;

  static GroundFormula constant(bool v);
  static GroundFormula fact(std::size_t i);
  static GroundFormula interval(std::size_t var, std::vector<bool> accepted);
  static GroundFormula defined(std::size_t def);
  static GroundFormula negation(GroundFormula child);
  static GroundFormula conjunction(std::vector<GroundFormula> children);
  static GroundFormula disjunction(std::vector<GroundFormula> children);
};

struct GroundDefinition {
  std::string name;
  GroundFormula formula;  // may reference only definitions with a lower index
};

/// Propositional program over Bernoulli facts and interval variables.
struct GroundProgram {
  std::vector<BernoulliFact> facts;
  std::vector<IntervalVariable> intervals;
  std::vector<GroundDefinition> definitions;
  std::size_t query = 0;  // index into definitions

  /// Throws InputError if masses, ordering or references are inconsistent.
  void check() const;
  /// Binary-equivalent size of the joint assignment space.
  int bits() const;
};

/// Text dump of facts, interval tables and definitions.
std::string dump(const GroundProgram& gp);

/// One value per variable: facts first (0/1), then interval indices.
using Assignment = std::vector<std::uint16_t>;

/// Truth of the query under a total assignment.
bool satisfies(const GroundProgram& gp, const Assignment& a);

/// Product of the assignment's probabilities over all variables.
double assignment_weight(const GroundProgram& gp, const Assignment& a);

struct ModelSet {
  std::vector<Assignment> models;
};

struct InferenceOptions {
  int max_bits = 24;
};

/// Exhaustive enumeration of the satisfying assignments. Throws ResourceError
/// when gp.bits() exceeds the limit.
ModelSet enumerate_models(const GroundProgram& gp, const InferenceOptions& options = {});

/// Sum over models of the product of assigned probabilities.
double wmc(const ModelSet& ms, const GroundProgram& gp);

/// Grounds the program at a 3D point for one query: a logic objective or a
/// rule head. Only definitions reachable from the query are grounded; each
/// continuous term is cut at every literal it is compared against there.
GroundProgram ground_at(const cola::Constitution& c, const starmap::StarMap& sm, Vec3 point,
                        const MissionSetting& setting, std::string_view query);

/// Grounds the conjunction of every logic field objective.
GroundProgram ground_compliance(const cola::Constitution& c, const starmap::StarMap& sm,
                                Vec3 point, const MissionSetting& setting);

/// P(SAT | point) for one query, or for the compliance conjunction if empty.
double query_probability(const cola::Constitution& c, const starmap::StarMap& sm, Vec3 point,
                         const MissionSetting& setting, std::optional<std::string> query = {},
                         const InferenceOptions& options = {});

/// Satisfaction probability at every node of `grid`.
ScalarGrid3D probability_field(const cola::Constitution& c, const starmap::StarMap& sm,
                               const GridSpec3D& grid, const MissionSetting& setting,
                               std::optional<std::string> query = {},
                               const InferenceOptions& options = {});

}  // namespace aerolex::inference
