#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aerolex/errors.hpp"

namespace aerolex::starmap {
class StarMap;
}

namespace aerolex::cola {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

/// Lexical or syntactic error with its position and what the parser expected.
class ParseError : public InputError {
 public:
  ParseError(SourceLocation where, std::string message, std::vector<std::string> expected = {});

  SourceLocation where() const { return where_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceLocation where_;
  std::vector<std::string> expected_;
};

enum class TermKind { distance, altitude, fact };
enum class CompareOp { less, greater, less_equal, greater_equal };

std::string_view to_string(CompareOp op);

/// Continuous quantity on the left of a comparison.
struct ContinuousTerm {
  TermKind kind = TermKind::altitude;
  std::string name;  // tag for distance, fact name for fact, empty for altitude

  friend bool operator==(const ContinuousTerm&, const ContinuousTerm&) = default;
  friend auto operator<=>(const ContinuousTerm&, const ContinuousTerm&) = default;
};

std::string to_string(const ContinuousTerm& term);

struct BodyExpr;
using Body = std::shared_ptr<const BodyExpr>;

enum class BodyKind { conjunction, disjunction, negation, atom, over, comparison };

/// Immutable propositional body tree.
struct BodyExpr {
  BodyKind kind = BodyKind::atom;
  std::vector<Body> children;  // conjunction/disjunction: >= 2; negation: 1
  std::string name;            // atom name or over() tag
  ContinuousTerm term;         // comparison
  CompareOp op = CompareOp::less;
  double literal = 0.0;
  SourceLocation where{};

  static Body make_atom(std::string name, SourceLocation where = {});
  static Body make_over(std::string tag, SourceLocation where = {});
  static Body make_comparison(ContinuousTerm term, CompareOp op, double literal,
                              SourceLocation where = {});
  static Body make_not(Body child, SourceLocation where = {});
  static Body make_and(std::vector<Body> children, SourceLocation where = {});
  static Body make_or(std::vector<Body> children, SourceLocation where = {});
};

/// Structural equality ignoring source locations.
bool same_structure(const Body& a, const Body& b);

struct ParameterGroup {
  std::vector<std::string> options;
  SourceLocation where{};
};

struct ContinuousFact {
  std::string name;
  std::string distribution;     // only "normal"
  std::vector<double> params;   // normal: mean, standard deviation
  SourceLocation where{};
};

struct Rule {
  std::string head;
  bool is_field = false;
  Body body;
  SourceLocation where{};
};

enum class ObjectiveScope { field, path };
enum class ObjectiveSource { logic, model };

struct ObjectiveDecl {
  ObjectiveScope scope = ObjectiveScope::field;
  std::string name;
  ObjectiveSource source = ObjectiveSource::logic;
  /// Logic objectives: their own body, or null when they name a rule head.
  Body body;
  /// Model objectives: opaque reference string.
  std::string model_ref;
  SourceLocation where{};
};

/// A parsed CoLa program. Immutable after parsing.
struct Constitution {
  std::string star_map_ref;
  std::vector<ParameterGroup> parameter_groups;
  std::vector<ContinuousFact> continuous_facts;
  std::vector<Rule> rules;
  std::vector<ObjectiveDecl> objectives;

  const Rule* find_rule(std::string_view head) const;
  const ContinuousFact* find_fact(std::string_view name) const;
  const ObjectiveDecl* find_objective(std::string_view name) const;
  /// Index of the group holding `option`, or -1.
  int group_of(std::string_view option) const;

  /// Body defining a name: a rule body, or a logic objective's own body.
  Body definition_of(std::string_view name) const;

  /// Logic-sourced field objectives in declaration order.
  std::vector<const ObjectiveDecl*> logic_objectives() const;
};

/// Parses CoLa source. Throws ParseError on lexical/syntax errors, duplicate
/// head definitions and unsupported distributions.
Constitution parse(std::string_view source);

Constitution parse_file(const std::string& path);

/// Canonical source text; parse(print(c)) is structurally equal to c.
std::string print(const Constitution& c);
std::string print(const Body& body);

bool same_structure(const Constitution& a, const Constitution& b);

enum class DiagnosticCode {
  cycle,
  missing_layer,
  unresolved_atom,
  duplicate_option,
  undefined_term,
  spatial_in_nonfield,
  objective_scope,
  no_objective,
  misused_name,
};

std::string_view to_string(DiagnosticCode code);

struct Diagnostic {
  DiagnosticCode code;
  std::string subject;  // the offending name, tag, or rule head
  std::string message;
  SourceLocation where{};
};

/// Available layers as (kind, tag) with kind "over" or "distance".
struct LayerCatalog {
  std::set<std::pair<std::string, std::string>> layers;
  bool has(std::string_view kind, std::string_view tag) const {
    return layers.count({std::string(kind), std::string(tag)}) != 0;
  }
};

LayerCatalog catalog_of(const starmap::StarMap& sm);

/// Static checks; returns an empty list iff the program is well formed.
std::vector<Diagnostic> validate(const Constitution& c, const LayerCatalog& layers);
std::vector<Diagnostic> validate(const Constitution& c, const starmap::StarMap& sm);

/// Every (relation kind, tag) referenced anywhere in the program.
std::set<std::pair<std::string, std::string>> referenced_relations(const Constitution& c);

/// Visits every node of a body tree in pre-order.
template <typename Fn>
void visit(const Body& body, Fn&& fn) {
  if (!body) return;
  fn(*body);
  for (const auto& child : body->children) visit(child, fn);
}

}  // namespace aerolex::cola
