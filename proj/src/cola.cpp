#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "aerolex/cola.hpp"
#include "aerolex/grid.hpp"
#include "aerolex/starmap.hpp"

namespace aerolex::cola {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::less: return "<";
    case CompareOp::greater: return ">";
    case CompareOp::less_equal: return "<=";
    case CompareOp::greater_equal: return ">=";
  }
  return "?";
}

std::string to_string(const ContinuousTerm& term) {
  switch (term.kind) {
    case TermKind::distance: return "distance(" + term.name + ")";
    case TermKind::altitude: return "altitude";
    case TermKind::fact: return term.name;
  }
  return "?";
}

Body BodyExpr::make_atom(std::string name, SourceLocation where) {
  auto b = std::make_shared<BodyExpr>();
  b->kind = BodyKind::atom;
  b->name = std::move(name);
  b->where = where;
  return b;
}

Body BodyExpr::make_over(std::string tag, SourceLocation where) {
  auto b = std::make_shared<BodyExpr>();
  b->kind = BodyKind::over;
  b->name = std::move(tag);
  b->where = where;
  return b;
}

Body BodyExpr::make_comparison(ContinuousTerm term, CompareOp op, double literal,
                               SourceLocation where) {
  auto b = std::make_shared<BodyExpr>();
  b->kind = BodyKind::comparison;
  b->term = std::move(term);
  b->op = op;
  b->literal = literal;
  b->where = where;
  return b;
}

Body BodyExpr::make_not(Body child, SourceLocation where) {
  auto b = std::make_shared<BodyExpr>();
  b->kind = BodyKind::negation;
  b->children.push_back(std::move(child));
  b->where = where;
  return b;
}

Body BodyExpr::make_and(std::vector<Body> children, SourceLocation where) {
  auto b = std::make_shared<BodyExpr>();
  b->kind = BodyKind::conjunction;
  b->children = std::move(children);
  b->where = where;
  return b;
}

Body BodyExpr::make_or(std::vector<Body> children, SourceLocation where) {
  auto b = std::make_shared<BodyExpr>();
  b->kind = BodyKind::disjunction;
  b->children = std::move(children);
  b->where = where;
  return b;
}

bool same_structure(const Body& a, const Body& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
  switch (a->kind) {
    case BodyKind::atom:
    case BodyKind::over:
      if (a->name != b->name) return false;
      break;
    case BodyKind::comparison:
      if (!(a->term == b->term) || a->op != b->op || a->literal != b->literal) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!same_structure(a->children[i], b->children[i])) return false;
  }
  return true;
}

const Rule* Constitution::find_rule(std::string_view head) const {
  for (const auto& r : rules) {
    if (r.head == head) return &r;
  }
  return nullptr;
}

const ContinuousFact* Constitution::find_fact(std::string_view name) const {
  for (const auto& f : continuous_facts) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const ObjectiveDecl* Constitution::find_objective(std::string_view name) const {
  for (const auto& o : objectives) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

int Constitution::group_of(std::string_view option) const {
  for (std::size_t g = 0; g < parameter_groups.size(); ++g) {
    const auto& opts = parameter_groups[g].options;
    if (std::find(opts.begin(), opts.end(), option) != opts.end()) return static_cast<int>(g);
  }
  return -1;
}

Body Constitution::definition_of(std::string_view name) const {
  if (const Rule* r = find_rule(name)) return r->body;
  if (const ObjectiveDecl* o = find_objective(name);
      o && o->source == ObjectiveSource::logic && o->body) {
    return o->body;
  }
  return nullptr;
}

std::vector<const ObjectiveDecl*> Constitution::logic_objectives() const {
  std::vector<const ObjectiveDecl*> out;
  for (const auto& o : objectives) {
    if (o.source == ObjectiveSource::logic && o.scope == ObjectiveScope::field) out.push_back(&o);
  }
  return out;
}

namespace {

void print_body(std::ostream& os, const Body& b, BodyKind parent, bool top) {
  const bool compound = b->kind == BodyKind::conjunction || b->kind == BodyKind::disjunction;
  // Same-kind nesting keeps its parentheses so the tree survives a round trip.
  const bool parens =
      !top && compound &&
      (parent == BodyKind::negation || parent == b->kind ||
       (parent == BodyKind::conjunction && b->kind == BodyKind::disjunction));
  if (parens) os << '(';
  switch (b->kind) {
    case BodyKind::atom: os << b->name; break;
    case BodyKind::over: os << "over(" << b->name << ')'; break;
    case BodyKind::comparison:
      os << to_string(b->term) << ' ' << to_string(b->op) << ' ' << format_double(b->literal);
      break;
    case BodyKind::negation:
      os << "not ";
      print_body(os, b->children.front(), BodyKind::negation, false);
      break;
    case BodyKind::conjunction:
    case BodyKind::disjunction: {
      const char* sep = b->kind == BodyKind::conjunction ? " and " : " or ";
      for (std::size_t i = 0; i < b->children.size(); ++i) {
        if (i) os << sep;
        print_body(os, b->children[i], b->kind, false);
      }
      break;
    }
  }
  if (parens) os << ')';
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string print(const Body& body) {
  std::ostringstream os;
  print_body(os, body, BodyKind::atom, true);
  return os.str();
}

std::string print(const Constitution& c) {
  std::ostringstream os;
  if (!c.star_map_ref.empty()) os << "star_map(" << quoted(c.star_map_ref) << ").\n";
  for (const auto& g : c.parameter_groups) {
    os << "parameter {";
    for (std::size_t i = 0; i < g.options.size(); ++i) os << (i ? ", " : "") << g.options[i];
    os << "}.\n";
  }
  for (const auto& f : c.continuous_facts) {
    os << f.name << " ~ " << f.distribution << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      os << (i ? ", " : "") << format_double(f.params[i]);
    }
    os << ").\n";
  }
  for (const auto& r : c.rules) {
    os << (r.is_field ? "field " : "") << r.head << " if " << print(r.body) << ".\n";
  }
  for (const auto& o : c.objectives) {
    os << (o.scope == ObjectiveScope::field ? "field" : "path") << " objective " << o.name;
    if (o.source == ObjectiveSource::model) {
      os << '(' << quoted(o.model_ref) << ')';
    } else if (o.body) {
      os << " if " << print(o.body);
    }
    os << ".\n";
  }
  return os.str();
}

bool same_structure(const Constitution& a, const Constitution& b) {
  if (a.star_map_ref != b.star_map_ref) return false;
  if (a.parameter_groups.size() != b.parameter_groups.size() ||
      a.continuous_facts.size() != b.continuous_facts.size() ||
      a.rules.size() != b.rules.size() || a.objectives.size() != b.objectives.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.parameter_groups.size(); ++i) {
    if (a.parameter_groups[i].options != b.parameter_groups[i].options) return false;
  }
  for (std::size_t i = 0; i < a.continuous_facts.size(); ++i) {
    const auto &x = a.continuous_facts[i], &y = b.continuous_facts[i];
    if (x.name != y.name || x.distribution != y.distribution || x.params != y.params) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    const auto &x = a.rules[i], &y = b.rules[i];
    if (x.head != y.head || x.is_field != y.is_field || !same_structure(x.body, y.body)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.objectives.size(); ++i) {
    const auto &x = a.objectives[i], &y = b.objectives[i];
    if (x.scope != y.scope || x.name != y.name || x.source != y.source ||
        x.model_ref != y.model_ref || !same_structure(x.body, y.body)) {
      return false;
    }
  }
  return true;
}

std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::cycle: return "cycle";
    case DiagnosticCode::missing_layer: return "missing-layer";
    case DiagnosticCode::unresolved_atom: return "unresolved-atom";
    case DiagnosticCode::duplicate_option: return "duplicate-option";
    case DiagnosticCode::undefined_term: return "undefined-term";
    case DiagnosticCode::spatial_in_nonfield: return "spatial-in-nonfield";
    case DiagnosticCode::objective_scope: return "objective-scope";
    case DiagnosticCode::no_objective: return "no-objective";
    case DiagnosticCode::misused_name: return "misused-name";
  }
  return "?";
}

LayerCatalog catalog_of(const starmap::StarMap& sm) {
  LayerCatalog cat;
  for (const auto& [key, layer] : sm.layers()) {
    cat.layers.insert({std::string(starmap::to_string(key.kind)), key.tag});
  }
  return cat;
}

std::set<std::pair<std::string, std::string>> referenced_relations(const Constitution& c) {
  std::set<std::pair<std::string, std::string>> out;
  auto scan = [&](const Body& b) {
    visit(b, [&](const BodyExpr& e) {
      if (e.kind == BodyKind::over) out.insert({"over", e.name});
      if (e.kind == BodyKind::comparison && e.term.kind == TermKind::distance) {
        out.insert({"distance", e.term.name});
      }
    });
  };
  for (const auto& r : c.rules) scan(r.body);
  for (const auto& o : c.objectives) scan(o.body);
  return out;
}

namespace {

struct Definition {
  std::string name;
  Body body;
  bool is_field = true;
  SourceLocation where;
};

std::vector<Definition> definitions_of(const Constitution& c) {
  std::vector<Definition> defs;
  for (const auto& r : c.rules) defs.push_back({r.head, r.body, r.is_field, r.where});
  for (const auto& o : c.objectives) {
    if (o.source == ObjectiveSource::logic && o.body) {
      defs.push_back({o.name, o.body, o.scope == ObjectiveScope::field, o.where});
    }
  }
  return defs;
}

}  // namespace

std::vector<Diagnostic> validate(const Constitution& c, const LayerCatalog& layers) {
  std::vector<Diagnostic> out;
  auto report = [&](DiagnosticCode code, std::string subject, std::string message,
                    SourceLocation where) {
    out.push_back({code, std::move(subject), std::move(message), where});
  };

  if (c.objectives.empty()) {
    report(DiagnosticCode::no_objective, "", "the program declares no objective", {});
  }

  std::map<std::string, int> option_group;
  for (std::size_t g = 0; g < c.parameter_groups.size(); ++g) {
    for (const auto& o : c.parameter_groups[g].options) {
      const auto [it, fresh] = option_group.emplace(o, static_cast<int>(g));
      if (!fresh) {
        report(DiagnosticCode::duplicate_option, o,
               "parameter option '" + o + "' appears in more than one group",
               c.parameter_groups[g].where);
      }
    }
  }

  const auto defs = definitions_of(c);
  std::map<std::string, const Definition*> by_name;
  for (const auto& d : defs) by_name.emplace(d.name, &d);

  for (const auto& d : defs) {
    visit(d.body, [&](const BodyExpr& e) {
      switch (e.kind) {
        case BodyKind::atom:
          if (by_name.count(e.name) || option_group.count(e.name)) break;
          if (c.find_fact(e.name)) {
            report(DiagnosticCode::misused_name, e.name,
                   "continuous fact '" + e.name + "' used as a proposition in '" + d.name + "'",
                   e.where);
          } else if (c.find_objective(e.name)) {
            report(DiagnosticCode::misused_name, e.name,
                   "model objective '" + e.name + "' used as a proposition in '" + d.name + "'",
                   e.where);
          } else {
            report(DiagnosticCode::unresolved_atom, e.name,
                   "atom '" + e.name + "' in '" + d.name + "' is not defined", e.where);
          }
          break;
        case BodyKind::over:
          if (!layers.has("over", e.name)) {
            report(DiagnosticCode::missing_layer, e.name,
                   "no 'over' layer for tag '" + e.name + "'", e.where);
          }
          break;
        case BodyKind::comparison:
          if (e.term.kind == TermKind::distance && !layers.has("distance", e.term.name)) {
            report(DiagnosticCode::missing_layer, e.term.name,
                   "no 'distance' layer for tag '" + e.term.name + "'", e.where);
          }
          if (e.term.kind == TermKind::fact && !c.find_fact(e.term.name)) {
            report(DiagnosticCode::undefined_term, e.term.name,
                   "'" + e.term.name + "' is compared but is not a continuous fact", e.where);
          }
          break;
        default:
          break;
      }
    });
  }

  // Cycles: depth-first search over defined names.
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::function<void(const Definition&)> dfs = [&](const Definition& d) {
    color[d.name] = 1;
    visit(d.body, [&](const BodyExpr& e) {
      if (e.kind != BodyKind::atom) return;
      const auto it = by_name.find(e.name);
      if (it == by_name.end()) return;
      const int state = color[e.name];
      if (state == 1) {
        report(DiagnosticCode::cycle, d.name,
               "'" + d.name + "' depends on itself through '" + e.name + "'", e.where);
      } else if (state == 0) {
        dfs(*it->second);
      }
    });
    color[d.name] = 2;
  };
  for (const auto& d : defs) {
    if (color[d.name] == 0) dfs(d);
  }

  // Non-field rules must not reach spatial atoms (guard against cycles).
  std::map<std::string, bool> spatial_memo;
  std::set<std::string> active;
  std::function<bool(const std::string&)> is_spatial = [&](const std::string& name) -> bool {
    if (const auto it = spatial_memo.find(name); it != spatial_memo.end()) return it->second;
    const auto def = by_name.find(name);
    if (def == by_name.end() || !active.insert(name).second) return false;
    bool spatial = false;
    visit(def->second->body, [&](const BodyExpr& e) {
      if (e.kind == BodyKind::over) spatial = true;
      if (e.kind == BodyKind::comparison && e.term.kind != TermKind::fact) spatial = true;
      if (e.kind == BodyKind::atom && is_spatial(e.name)) spatial = true;
    });
    active.erase(name);
    spatial_memo[name] = spatial;
    return spatial;
  };
  for (const auto& d : defs) {
    if (!d.is_field && is_spatial(d.name)) {
      report(DiagnosticCode::spatial_in_nonfield, d.name,
             "'" + d.name + "' is not a field rule but depends on spatial relations", d.where);
    }
  }

  for (const auto& o : c.objectives) {
    if (o.source == ObjectiveSource::logic && o.scope == ObjectiveScope::path) {
      report(DiagnosticCode::objective_scope, o.name,
             "path objective '" + o.name + "' must reference a model", o.where);
    }
    if (o.source == ObjectiveSource::logic && !o.body && !c.find_rule(o.name)) {
      report(DiagnosticCode::unresolved_atom, o.name,
             "objective '" + o.name + "' names no rule", o.where);
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const Constitution& c, const starmap::StarMap& sm) {
  return validate(c, catalog_of(sm));
}

}  // namespace aerolex::cola
