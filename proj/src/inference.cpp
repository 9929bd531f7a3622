#include "aerolex/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "aerolex/errors.hpp"
#include "aerolex/parallel.hpp"

namespace aerolex::inference {

using cola::Body;
using cola::BodyExpr;
using cola::BodyKind;
using cola::CompareOp;
using cola::ContinuousTerm;
using cola::TermKind;

MissionSetting default_setting(const cola::Constitution& c) {
  MissionSetting s;
  for (const auto& g : c.parameter_groups) s.choices.push_back(g.options.front());
  return s;
}

MissionSetting make_setting(const cola::Constitution& c, const std::vector<std::string>& options) {
  MissionSetting s;
  s.choices.assign(c.parameter_groups.size(), "");
  for (const auto& o : options) {
    const int g = c.group_of(o);
    if (g < 0) throw InputError("'" + o + "' is not a parameter option");
    if (!s.choices[g].empty()) {
      throw InputError("options '" + s.choices[g] + "' and '" + o + "' belong to the same group");
    }
    s.choices[g] = o;
  }
  for (std::size_t g = 0; g < s.choices.size(); ++g) {
    if (s.choices[g].empty()) {
      throw InputError("no option chosen for parameter group {" +
                       c.parameter_groups[g].options.front() + ", ...}");
    }
  }
  return s;
}

void check_setting(const cola::Constitution& c, const MissionSetting& s) {
  if (s.choices.size() != c.parameter_groups.size()) {
    throw InputError("mission setting must choose one option per parameter group");
  }
  for (std::size_t g = 0; g < s.choices.size(); ++g) {
    const auto& opts = c.parameter_groups[g].options;
    if (std::find(opts.begin(), opts.end(), s.choices[g]) == opts.end()) {
      throw InputError("'" + s.choices[g] + "' is not an option of parameter group " +
                       std::to_string(g));
    }
  }
}

std::string to_string(const MissionSetting& s) {
  std::string out;
  for (std::size_t i = 0; i < s.choices.size(); ++i) out += (i ? ", " : "") + s.choices[i];
  return out;
}

double normal_cdf(double x, double mean, double stddev) {
  return 0.5 * std::erfc(-(x - mean) / (stddev * std::numbers::sqrt2));
}

std::vector<double> interval_masses(double mean, double stddev, const std::vector<double>& cuts) {
  // Differences of lower-tail CDFs below the mean, of upper-tail CDFs above,
  // so tiny tail masses are not lost to cancellation.
  auto lower = [&](double x) { return normal_cdf(x, mean, stddev); };
  auto upper = [&](double x) {
    return 0.5 * std::erfc((x - mean) / (stddev * std::numbers::sqrt2));
  };
  std::vector<double> masses;
  masses.reserve(cuts.size() + 1);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const double a = i == 0 ? -inf : cuts[i - 1];
    const double b = i == cuts.size() ? inf : cuts[i];
    double m;
    if (b <= mean) {
      m = (b == inf ? 1.0 : lower(b)) - (a == -inf ? 0.0 : lower(a));
    } else if (a >= mean) {
      m = (a == -inf ? 1.0 : upper(a)) - (b == inf ? 0.0 : upper(b));
    } else {
      m = 1.0 - (a == -inf ? 0.0 : lower(a)) - (b == inf ? 0.0 : upper(b));
    }
    masses.push_back(std::max(0.0, m));
  }
  return masses;
}

GroundFormula GroundFormula::constant(bool v) {
  GroundFormula f;
  f.kind = NodeKind::constant;
  f.value = v;
  return f;
}

GroundFormula GroundFormula::fact(std::size_t i) {
  GroundFormula f;
  f.kind = NodeKind::fact;
  f.index = i;
  return f;
}

GroundFormula GroundFormula::interval(std::size_t var, std::vector<bool> accepted) {
  GroundFormula f;
  f.kind = NodeKind::interval;
  f.index = var;
  f.accepted = std::move(accepted);
  return f;
}

GroundFormula GroundFormula::defined(std::size_t def) {
  GroundFormula f;
  f.kind = NodeKind::defined;
  f.index = def;
  return f;
}

GroundFormula GroundFormula::negation(GroundFormula child) {
  GroundFormula f;
  f.kind = NodeKind::negation;
  f.children.push_back(std::move(child));
  return f;
}

GroundFormula GroundFormula::conjunction(std::vector<GroundFormula> children) {
  GroundFormula f;
  f.kind = NodeKind::conjunction;
  f.children = std::move(children);
  return f;
}

GroundFormula GroundFormula::disjunction(std::vector<GroundFormula> children) {
  GroundFormula f;
  f.kind = NodeKind::disjunction;
  f.children = std::move(children);
  return f;
}

namespace {

void check_formula(const GroundProgram& gp, const GroundFormula& f, std::size_t owner) {
  switch (f.kind) {
    case NodeKind::constant: break;
    case NodeKind::fact:
      if (f.index >= gp.facts.size()) throw InputError("formula references an unknown fact");
      break;
    case NodeKind::interval:
      if (f.index >= gp.intervals.size() ||
          f.accepted.size() != gp.intervals[f.index].masses.size()) {
        throw InputError("formula references an unknown interval variable");
      }
      break;
    case NodeKind::defined:
      if (f.index >= owner) throw InputError("definitions must reference earlier definitions");
      break;
    case NodeKind::negation:
      if (f.children.size() != 1) throw InputError("negation needs one operand");
      break;
    case NodeKind::conjunction:
    case NodeKind::disjunction:
      break;
  }
  for (const auto& child : f.children) check_formula(gp, child, owner);
}

}  // namespace

void GroundProgram::check() const {
  for (const auto& f : facts) {
    if (!(f.probability >= 0.0 && f.probability <= 1.0)) {
      throw InputError("fact '" + f.name + "' has a probability outside [0, 1]");
    }
  }
  for (const auto& v : intervals) {
    if (v.masses.size() != v.cuts.size() + 1) throw InputError("interval table size mismatch");
    if (!std::is_sorted(v.cuts.begin(), v.cuts.end()) ||
        std::adjacent_find(v.cuts.begin(), v.cuts.end()) != v.cuts.end()) {
      throw InputError("interval cuts must be strictly increasing");
    }
    double sum = 0.0;
    for (double m : v.masses) {
      if (!(m >= 0.0 && m <= 1.0)) throw InputError("interval mass outside [0, 1]");
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InputError("interval masses of '" + v.name + "' do not sum to 1");
    }
  }
  if (query >= definitions.size()) throw InputError("query is not a definition");
  for (std::size_t i = 0; i < definitions.size(); ++i) check_formula(*this, definitions[i].formula, i);
}

int GroundProgram::bits() const {
  int b = static_cast<int>(facts.size());
  for (const auto& v : intervals) {
    b += static_cast<int>(std::ceil(std::log2(static_cast<double>(v.masses.size()))));
  }
  return b;
}

namespace {

void dump_formula(std::ostream& os, const GroundProgram& gp, const GroundFormula& f) {
  switch (f.kind) {
    case NodeKind::constant: os << (f.value ? "true" : "false"); break;
    case NodeKind::fact: os << gp.facts[f.index].name; break;
    case NodeKind::interval: {
      os << gp.intervals[f.index].name << " in {";
      bool first = true;
      for (std::size_t i = 0; i < f.accepted.size(); ++i) {
        if (!f.accepted[i]) continue;
        os << (first ? "" : ",") << 'I' << i;
        first = false;
      }
      os << '}';
      break;
    }
    case NodeKind::defined: os << gp.definitions[f.index].name; break;
    case NodeKind::negation:
      os << "not ";
      dump_formula(os, gp, f.children.front());
      break;
    case NodeKind::conjunction:
    case NodeKind::disjunction:
      os << '(';
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) os << (f.kind == NodeKind::conjunction ? " and " : " or ");
        dump_formula(os, gp, f.children[i]);
      }
      os << ')';
      break;
  }
}

}  // namespace

std::string dump(const GroundProgram& gp) {
  std::ostringstream os;
  os.precision(17);
  os << "facts:\n";
  for (const auto& f : gp.facts) os << "  " << f.name << " : " << f.probability << '\n';
  os << "intervals:\n";
  for (const auto& v : gp.intervals) {
    os << "  " << v.name << " cuts [";
    for (std::size_t i = 0; i < v.cuts.size(); ++i) os << (i ? ", " : "") << v.cuts[i];
    os << "]\n";
    for (std::size_t i = 0; i < v.masses.size(); ++i) {
      os << "    I" << i << " : " << v.masses[i] << '\n';
    }
  }
  os << "definitions:\n";
  for (std::size_t i = 0; i < gp.definitions.size(); ++i) {
    os << "  " << (i == gp.query ? "?" : " ") << gp.definitions[i].name << " := ";
    dump_formula(os, gp, gp.definitions[i].formula);
    os << '\n';
  }
  return os.str();
}

namespace {

bool eval_formula(const GroundFormula& f, const Assignment& a, std::size_t n_facts,
                  const std::vector<char>& defs) {
  switch (f.kind) {
    case NodeKind::constant: return f.value;
    case NodeKind::fact: return a[f.index] != 0;
    case NodeKind::interval: return f.accepted[a[n_facts + f.index]];
    case NodeKind::defined: return defs[f.index] != 0;
    case NodeKind::negation: return !eval_formula(f.children.front(), a, n_facts, defs);
    case NodeKind::conjunction:
      for (const auto& c : f.children) {
        if (!eval_formula(c, a, n_facts, defs)) return false;
      }
      return true;
    case NodeKind::disjunction:
      for (const auto& c : f.children) {
        if (eval_formula(c, a, n_facts, defs)) return true;
      }
      return false;
  }
  return false;
}

bool satisfies_with(const GroundProgram& gp, const Assignment& a, std::vector<char>& defs) {
  defs.assign(gp.definitions.size(), 0);
  for (std::size_t i = 0; i <= gp.query; ++i) {
    defs[i] = eval_formula(gp.definitions[i].formula, a, gp.facts.size(), defs) ? 1 : 0;
  }
  return defs[gp.query] != 0;
}

}  // namespace

bool satisfies(const GroundProgram& gp, const Assignment& a) {
  std::vector<char> defs;
  return satisfies_with(gp, a, defs);
}

double assignment_weight(const GroundProgram& gp, const Assignment& a) {
  double w = 1.0;
  for (std::size_t i = 0; i < gp.facts.size(); ++i) {
    const double p = gp.facts[i].probability;
    w *= a[i] ? p : 1.0 - p;
  }
  for (std::size_t v = 0; v < gp.intervals.size(); ++v) {
    w *= gp.intervals[v].masses[a[gp.facts.size() + v]];
  }
  return w;
}

ModelSet enumerate_models(const GroundProgram& gp, const InferenceOptions& options) {
  gp.check();
  if (gp.bits() > options.max_bits) {
    throw ResourceError("ground program needs " + std::to_string(gp.bits()) +
                        " binary variables (limit " + std::to_string(options.max_bits) +
                        "); simplify the rules or reduce distinct comparison literals");
  }
  std::vector<std::uint16_t> radix;
  for (std::size_t i = 0; i < gp.facts.size(); ++i) radix.push_back(2);
  for (const auto& v : gp.intervals) radix.push_back(static_cast<std::uint16_t>(v.masses.size()));

  ModelSet ms;
  Assignment a(radix.size(), 0);
  std::vector<char> defs;
  for (;;) {
    if (satisfies_with(gp, a, defs)) ms.models.push_back(a);
    // Mixed-radix increment, first variable fastest.
    std::size_t pos = 0;
    while (pos < a.size()) {
      if (++a[pos] < radix[pos]) break;
      a[pos] = 0;
      ++pos;
    }
    if (pos == a.size()) break;
  }
  return ms;
}

double wmc(const ModelSet& ms, const GroundProgram& gp) {
  double sum = 0.0;
  for (const auto& m : ms.models) sum += assignment_weight(gp, m);
  return std::clamp(sum, 0.0, 1.0);
}

namespace {

constexpr double kPointMassSigma = 1e-6;

bool compare(double value, CompareOp op, double literal) {
  switch (op) {
    case CompareOp::less: return value < literal;
    case CompareOp::greater: return value > literal;
    case CompareOp::less_equal: return value <= literal;
    case CompareOp::greater_equal: return value >= literal;
  }
  return false;
}

class Grounder {
 public:
  Grounder(const cola::Constitution& c, const starmap::StarMap& sm, Vec3 point,
           const MissionSetting& setting)
      : c_(c), sm_(sm), point_(point), setting_(setting) {
    check_setting(c, setting);
    if (!sm.grid().contains(point.xy())) {
      std::ostringstream os;
      os << "point (" << point.x << ", " << point.y << ", " << point.z
         << ") lies outside the StaR map";
      throw InputError(os.str());
    }
  }

  /// Resolves a query name to the body whose truth is queried.
  Body query_body(std::string_view query) const {
    if (const auto* o = c_.find_objective(query)) {
      if (o->source == cola::ObjectiveSource::model) {
        throw InputError("objective '" + std::string(query) +
                         "' is model-sourced and has no probability");
      }
      if (o->body) return o->body;
    }
    if (const auto* r = c_.find_rule(query)) return r->body;
    throw InputError("'" + std::string(query) + "' is neither a logic objective nor a rule");
  }

  GroundProgram ground(const std::vector<std::string>& names) {
    // Order reachable definitions so that dependencies come first.
    for (const auto& n : names) order_definition(n);
    for (const auto& n : ordered_) collect_terms(c_.definition_of(n));
    build_variables();

    for (const auto& n : ordered_) {
      const std::size_t idx = gp_.definitions.size();
      def_index_[n] = idx;
      gp_.definitions.push_back({n, translate(c_.definition_of(n))});
    }
    if (names.size() == 1) {
      gp_.query = def_index_.at(names.front());
    } else {
      std::vector<GroundFormula> parts;
      for (const auto& n : names) parts.push_back(GroundFormula::defined(def_index_.at(n)));
      gp_.definitions.push_back({"compliance", GroundFormula::conjunction(std::move(parts))});
      gp_.query = gp_.definitions.size() - 1;
    }
    return std::move(gp_);
  }

 private:
  void order_definition(const std::string& name) {
    if (done_.count(name)) return;
    if (!visiting_.insert(name).second) {
      throw InputError("rule '" + name + "' depends on itself");
    }
    const Body body = c_.definition_of(name);
    if (!body) throw InputError("'" + name + "' is not defined");
    cola::visit(body, [&](const BodyExpr& e) {
      if (e.kind == BodyKind::atom && c_.group_of(e.name) < 0) {
        if (!c_.definition_of(e.name)) {
          throw InputError("atom '" + e.name + "' is not defined");
        }
        order_definition(e.name);
      }
    });
    visiting_.erase(name);
    done_.insert(name);
    ordered_.push_back(name);
  }

  void collect_terms(const Body& body) {
    cola::visit(body, [&](const BodyExpr& e) {
      if (e.kind == BodyKind::over && !fact_index_.count(e.name)) {
        fact_index_[e.name] = fact_order_.size();
        fact_order_.push_back(e.name);
      }
      if (e.kind == BodyKind::comparison && e.term.kind != TermKind::altitude) {
        if (!cuts_.count(e.term)) term_order_.push_back(e.term);
        cuts_[e.term].insert(e.literal);
      }
    });
  }

  void build_variables() {
    for (const auto& tag : fact_order_) {
      const auto& layer = sm_.layer(starmap::RelationKind::over, tag);
      gp_.facts.push_back({"over(" + tag + ")", starmap::interpolate_layer(layer, point_.xy()).value});
    }
    for (const auto& term : term_order_) {
      double mean = 0.0, stddev = 0.0;
      if (term.kind == TermKind::distance) {
        const auto& layer = sm_.layer(starmap::RelationKind::distance, term.name);
        const auto params = starmap::interpolate_layer(layer, point_.xy());
        mean = params.value;
        stddev = params.spread;
      } else {
        const auto* fact = c_.find_fact(term.name);
        if (!fact) throw InputError("'" + term.name + "' is not a continuous fact");
        mean = fact->params[0];
        stddev = fact->params[1];
      }
      if (stddev < kPointMassSigma) {
        constants_[term] = mean;
        continue;
      }
      IntervalVariable v;
      v.name = cola::to_string(term);
      v.cuts.assign(cuts_[term].begin(), cuts_[term].end());
      v.masses = interval_masses(mean, stddev, v.cuts);
      interval_index_[term] = gp_.intervals.size();
      gp_.intervals.push_back(std::move(v));
    }
  }

  GroundFormula translate(const Body& b) {
    switch (b->kind) {
      case BodyKind::atom: {
        const int g = c_.group_of(b->name);
        if (g >= 0) return GroundFormula::constant(setting_.choices[g] == b->name);
        return GroundFormula::defined(def_index_.at(b->name));
      }
      case BodyKind::over:
        return GroundFormula::fact(fact_index_.at(b->name));
      case BodyKind::comparison: {
        if (b->term.kind == TermKind::altitude) {
          return GroundFormula::constant(compare(point_.z, b->op, b->literal));
        }
        if (const auto it = constants_.find(b->term); it != constants_.end()) {
          return GroundFormula::constant(compare(it->second, b->op, b->literal));
        }
        const std::size_t var = interval_index_.at(b->term);
        const auto& cuts = gp_.intervals[var].cuts;
        const std::size_t j =
            static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), b->literal) -
                                     cuts.begin());
        // Interval i spans (cut[i-1], cut[i]); the literal is cut[j].
        std::vector<bool> accepted(cuts.size() + 1);
        const bool below = b->op == CompareOp::less || b->op == CompareOp::less_equal;
        for (std::size_t i = 0; i < accepted.size(); ++i) accepted[i] = below ? i <= j : i > j;
        return GroundFormula::interval(var, std::move(accepted));
      }
      case BodyKind::negation:
        return GroundFormula::negation(translate(b->children.front()));
      case BodyKind::conjunction:
      case BodyKind::disjunction: {
        std::vector<GroundFormula> parts;
        for (const auto& child : b->children) parts.push_back(translate(child));
        return b->kind == BodyKind::conjunction ? GroundFormula::conjunction(std::move(parts))
                                                : GroundFormula::disjunction(std::move(parts));
      }
    }
    return GroundFormula::constant(false);
  }

  const cola::Constitution& c_;
  const starmap::StarMap& sm_;
  Vec3 point_;
  const MissionSetting& setting_;

  std::set<std::string> done_, visiting_;
  std::vector<std::string> ordered_;
  std::map<std::string, std::size_t> fact_index_;
  std::vector<std::string> fact_order_;
  std::map<ContinuousTerm, std::set<double>> cuts_;
  std::vector<ContinuousTerm> term_order_;
  std::map<ContinuousTerm, std::size_t> interval_index_;
  std::map<ContinuousTerm, double> constants_;
  std::map<std::string, std::size_t> def_index_;
  GroundProgram gp_;
};

// A logic objective without a body stands for the rule of the same name.
std::string query_name(const cola::ObjectiveDecl& o) { return o.name; }

}  // namespace

GroundProgram ground_at(const cola::Constitution& c, const starmap::StarMap& sm, Vec3 point,
                        const MissionSetting& setting, std::string_view query) {
  Grounder g(c, sm, point, setting);
  g.query_body(query);  // rejects model-sourced objectives and unknown names
  return g.ground({std::string(query)});
}

GroundProgram ground_compliance(const cola::Constitution& c, const starmap::StarMap& sm,
                                Vec3 point, const MissionSetting& setting) {
  const auto objectives = c.logic_objectives();
  if (objectives.empty()) throw InputError("the program has no logic field objective");
  std::vector<std::string> names;
  for (const auto* o : objectives) names.push_back(query_name(*o));
  Grounder g(c, sm, point, setting);
  return g.ground(names);
}

double query_probability(const cola::Constitution& c, const starmap::StarMap& sm, Vec3 point,
                         const MissionSetting& setting, std::optional<std::string> query,
                         const InferenceOptions& options) {
  const GroundProgram gp =
      query ? ground_at(c, sm, point, setting, *query) : ground_compliance(c, sm, point, setting);
  return wmc(enumerate_models(gp, options), gp);
}

ScalarGrid3D probability_field(const cola::Constitution& c, const starmap::StarMap& sm,
                               const GridSpec3D& grid, const MissionSetting& setting,
                               std::optional<std::string> query,
                               const InferenceOptions& options) {
  ScalarGrid3D field(grid, 0.0);
  auto& values = field.values();
  parallel_for(grid.size(), [&](std::size_t n) {
    const Vec3 p = grid.node(n);
    try {
      values[n] = query_probability(c, sm, p, setting, query, options);
    } catch (const ResourceError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "at node (" << p.x << ", " << p.y << ", " << p.z << "): " << e.what();
      throw InputError(os.str());
    }
  });
  return field;
}

}  // namespace aerolex::inference
