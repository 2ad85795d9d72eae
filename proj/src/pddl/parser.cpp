#include "pddlforge/pddl/parser.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>

#include "pddlforge/pddl/sexpr.hpp"

namespace pddlforge::pddl {

namespace {

constexpr std::array kSupportedRequirements = {
    ":strips", ":typing", ":negative-preconditions", ":equality", ":conditional-effects", ":adl",
};

[[noreturn]] void fail(const SExpr& at, const std::string& message) {
  throw ParseError(message, at.line, at.column);
}

[[noreturn]] void unsupported(const SExpr& at, const std::string& feature) {
  throw UnsupportedFeature(feature, at.line, at.column);
}

std::string where(const SExpr& at) {
  return " (line " + std::to_string(at.line) + ")";
}

Symbol to_symbol(const SExpr& e) {
  if (e.is_list) fail(e, "expected identifier, found list");
  if (!Symbol::is_valid(e.token)) fail(e, "invalid identifier '" + e.token + "'");
  return Symbol(e.token);
}

Symbol to_name(const SExpr& e) {
  Symbol s = to_symbol(e);
  if (s.is_variable()) fail(e, "expected a name, found variable '" + e.token + "'");
  return s;
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) fail(e, std::string("expected ") + what);
  return e;
}

// `a b - t c` style lists. `either` types are outside the subset.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, size_t first,
                                        bool variables) {
  std::vector<TypedName> out;
  std::vector<Symbol> pending;
  for (size_t i = first; i < items.size(); ++i) {
    const SExpr& e = items[i];
    if (e.is_token("-")) {
      if (pending.empty()) fail(e, "'-' without preceding names");
      if (i + 1 >= items.size()) fail(e, "missing type after '-'");
      const SExpr& t = items[++i];
      if (t.is_list) {
        if (!t.items.empty() && t.items[0].is_token("either")) unsupported(t, "either");
        fail(t, "expected type name");
      }
      Symbol type = to_name(t);
      for (auto& n : pending) out.push_back({std::move(n), type});
      pending.clear();
      continue;
    }
    Symbol s = to_symbol(e);
    if (s.is_variable() != variables) {
      fail(e, variables ? "expected variable, found '" + e.token + "'"
                        : "unexpected variable '" + e.token + "'");
    }
    pending.push_back(std::move(s));
  }
  for (auto& n : pending) out.push_back({std::move(n), object_type()});
  return out;
}

void reject_numeric_section(const SExpr& e, const std::string& key) {
  if (key == ":functions") unsupported(e, ":numeric-fluents");
  if (key == ":durative-action") unsupported(e, ":durative-actions");
  if (key == ":derived") unsupported(e, ":derived-predicates");
  if (key == ":constraints") unsupported(e, ":constraints");
  if (key == ":metric") unsupported(e, ":numeric-fluents");
}

// Resolves argument types and checks literals against signatures.
class Checker {
 public:
  Checker(const Domain& domain, const Problem* problem) : domain_(domain), problem_(problem) {}

  void set_scope(const std::vector<TypedName>& params) {
    scope_.clear();
    for (const auto& p : params) scope_[p.name] = p.type;
  }

  void check_atom(const Atom& atom, const SExpr& at, bool ground_context) const {
    if (atom.predicate == Symbol::equality()) {
      if (atom.args.size() != 2) fail(at, "equality takes exactly 2 arguments");
      for (const auto& a : atom.args) (void)type_of(a, at);
      return;
    }
    const PredicateSignature* sig = domain_.find_predicate(atom.predicate);
    if (sig == nullptr) {
      throw SemanticError("unknown predicate '" + atom.predicate.str() + "' in " + atom.str() + where(at));
    }
    if (sig->arity() != atom.args.size()) {
      throw SemanticError("arity mismatch in " + atom.str() + ": '" + atom.predicate.str() +
                          "' takes " + std::to_string(sig->arity()) + " argument(s), got " +
                          std::to_string(atom.args.size()) + where(at));
    }
    for (size_t i = 0; i < atom.args.size(); ++i) {
      Symbol actual = type_of(atom.args[i], at);
      const Symbol& declared = sig->parameters[i].type;
      bool ok = ground_context ? domain_.is_subtype(actual, declared)
                               : domain_.is_subtype(actual, declared) || domain_.is_subtype(declared, actual);
      if (!ok) {
        throw SemanticError("type mismatch in " + atom.str() + ": argument " + std::to_string(i + 1) +
                            " '" + atom.args[i].str() + "' is " + actual.str() + ", expected " +
                            declared.str() + where(at));
      }
    }
  }

 private:
  Symbol type_of(const Symbol& arg, const SExpr& at) const {
    if (arg.is_variable()) {
      auto it = scope_.find(arg);
      if (it == scope_.end()) {
        throw SemanticError("undeclared variable '" + arg.str() + "'" + where(at));
      }
      return it->second;
    }
    if (problem_ != nullptr) {
      if (const auto* o = problem_->find_object(arg)) return o->type;
    }
    if (const auto* c = domain_.find_constant(arg)) return c->type;
    throw SemanticError("undeclared object '" + arg.str() + "'" + where(at));
  }

  const Domain& domain_;
  const Problem* problem_;
  std::unordered_map<Symbol, Symbol> scope_;
};

Atom parse_atom_expr(const SExpr& e) {
  expect_list(e, "atom");
  if (e.items.empty()) fail(e, "empty atom");
  const SExpr& head = e.items[0];
  if (head.is_list) fail(head, "expected predicate name");
  Atom atom;
  if (head.token == "=") {
    atom.predicate = Symbol::equality();
  } else {
    atom.predicate = to_name(head);
  }
  for (size_t i = 1; i < e.items.size(); ++i) {
    if (e.items[i].is_list) {
      // (= (f ?x) 3) and friends
      unsupported(e.items[i], ":numeric-fluents");
    }
    atom.args.push_back(to_symbol(e.items[i]));
  }
  return atom;
}

using LiteralSink = std::vector<std::pair<Literal, const SExpr*>>;

void parse_condition_into(const SExpr& e, LiteralSink& out) {
  expect_list(e, "condition");
  if (e.items.empty()) return;  // ()
  const SExpr& head = e.items[0];
  if (head.is_token()) {
    std::string k = head.lower();
    if (k == "and") {
      for (size_t i = 1; i < e.items.size(); ++i) parse_condition_into(e.items[i], out);
      return;
    }
    if (k == "not") {
      if (e.items.size() != 2) fail(e, "'not' takes exactly one argument");
      const SExpr& inner = e.items[1];
      expect_list(inner, "atom inside 'not'");
      if (!inner.items.empty() && inner.items[0].is_token()) {
        std::string ik = inner.items[0].lower();
        if (ik == "and" || ik == "or" || ik == "not" || ik == "imply" || ik == "forall" || ik == "exists") {
          unsupported(inner, ":disjunctive-preconditions");
        }
      }
      out.push_back({Literal{parse_atom_expr(inner), true}, &inner});
      return;
    }
    if (k == "or" || k == "imply") unsupported(e, ":disjunctive-preconditions");
    if (k == "forall" || k == "exists") unsupported(e, ":quantified-preconditions");
    if (k == "<" || k == ">" || k == "<=" || k == ">=") unsupported(e, ":numeric-fluents");
  }
  out.push_back({Literal{parse_atom_expr(e), false}, &e});
}

Condition parse_condition(const SExpr& e, const Checker* checker, bool ground) {
  LiteralSink sink;
  parse_condition_into(e, sink);
  Condition c;
  for (auto& [lit, at] : sink) {
    if (checker != nullptr) checker->check_atom(lit.atom, *at, ground);
    c.literals.push_back(std::move(lit));
  }
  return c;
}

void reject_numeric_effect(const SExpr& e, const std::string& k) {
  static const std::set<std::string> kNumeric = {"increase", "decrease", "assign", "scale-up",
                                                 "scale-down"};
  if (kNumeric.contains(k)) unsupported(e, ":numeric-fluents");
  if (k == "forall") unsupported(e, "forall");
  if (k == "or" || k == "imply" || k == "exists") fail(e, "'" + k + "' is not allowed in effects");
}

// Collects add/delete atoms of a simple (when-free) effect branch.
void parse_simple_effect(const SExpr& e, std::vector<Atom>& adds, std::vector<Atom>& dels,
                         const Checker& checker) {
  expect_list(e, "effect");
  if (e.items.empty()) return;
  const SExpr& head = e.items[0];
  if (head.is_token()) {
    std::string k = head.lower();
    if (k == "and") {
      for (size_t i = 1; i < e.items.size(); ++i) parse_simple_effect(e.items[i], adds, dels, checker);
      return;
    }
    if (k == "when") unsupported(e, "nested when");
    if (k == "not") {
      if (e.items.size() != 2) fail(e, "'not' takes exactly one argument");
      Atom a = parse_atom_expr(e.items[1]);
      if (a.predicate == Symbol::equality()) fail(e, "equality cannot be an effect");
      checker.check_atom(a, e.items[1], false);
      dels.push_back(std::move(a));
      return;
    }
    reject_numeric_effect(e, k);
  }
  Atom a = parse_atom_expr(e);
  if (a.predicate == Symbol::equality()) fail(e, "equality cannot be an effect");
  checker.check_atom(a, e, false);
  adds.push_back(std::move(a));
}

void check_disjoint(const std::vector<Atom>& adds, const std::vector<Atom>& dels, const SExpr& at) {
  for (const auto& a : adds) {
    if (std::find(dels.begin(), dels.end(), a) != dels.end()) {
      throw SemanticError("atom " + a.str() + " is both added and deleted in the same effect" + where(at));
    }
  }
}

void parse_effect_into(const SExpr& e, Effect& effect, const Checker& checker) {
  expect_list(e, "effect");
  if (e.items.empty()) return;
  const SExpr& head = e.items[0];
  if (head.is_token()) {
    std::string k = head.lower();
    if (k == "and") {
      for (size_t i = 1; i < e.items.size(); ++i) parse_effect_into(e.items[i], effect, checker);
      return;
    }
    if (k == "when") {
      if (e.items.size() != 3) fail(e, "'when' takes a condition and an effect");
      ConditionalEffect ce;
      ce.condition = parse_condition(e.items[1], &checker, false);
      parse_simple_effect(e.items[2], ce.adds, ce.deletes, checker);
      check_disjoint(ce.adds, ce.deletes, e);
      effect.conditional.push_back(std::move(ce));
      return;
    }
  }
  parse_simple_effect(e, effect.adds, effect.deletes, checker);
}

void check_unique(const std::vector<Symbol>& names, const char* category, const SExpr& at) {
  std::set<Symbol> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw SemanticError(std::string("duplicate ") + category + " '" + n.str() + "'" + where(at));
    }
  }
}

void check_types_acyclic(const Domain& d, const SExpr& at) {
  for (const auto& t : d.types) {
    Symbol cur = t.type;
    for (size_t steps = 0; cur != object_type(); ++steps) {
      if (cur == t.name || steps > d.types.size()) {
        throw SemanticError("cyclic type hierarchy involving '" + t.name.str() + "'" + where(at));
      }
      auto it = std::find_if(d.types.begin(), d.types.end(),
                             [&](const TypedName& x) { return x.name == cur; });
      if (it == d.types.end()) break;
      cur = it->type;
    }
  }
}

std::pair<std::string, const SExpr*> section_key(const SExpr& e) {
  if (!e.is_list || e.items.empty() || e.items[0].is_list) fail(e, "expected a section");
  return {e.items[0].lower(), &e.items[0]};
}

const SExpr& header(const SExpr& root, const char* kind) {
  expect_list(root, "(define ...)");
  if (root.items.size() < 2 || !root.items[0].is_token("define")) fail(root, "expected (define ...)");
  const SExpr& h = root.items[1];
  if (!h.is_list || h.items.size() != 2 || !h.items[0].is_token(kind)) {
    fail(h, std::string("expected (") + kind + " <name>)");
  }
  return h;
}

ActionSchema parse_action(const SExpr& e, const Domain& domain) {
  if (e.items.size() < 2) fail(e, "action without name");
  ActionSchema a;
  a.name = to_name(e.items[1]);
  Checker checker(domain, nullptr);
  const SExpr* pre = nullptr;
  const SExpr* eff = nullptr;
  for (size_t i = 2; i < e.items.size(); i += 2) {
    const SExpr& key = e.items[i];
    if (key.is_list) fail(key, "expected action keyword");
    if (i + 1 >= e.items.size()) fail(key, "missing value for " + key.token);
    const SExpr& value = e.items[i + 1];
    std::string k = key.lower();
    if (k == ":parameters") {
      expect_list(value, "parameter list");
      a.parameters = parse_typed_list(value.items, 0, true);
      std::vector<Symbol> names;
      for (const auto& p : a.parameters) {
        if (!domain.has_type(p.type)) {
          throw SemanticError("unknown type '" + p.type.str() + "' for parameter " + p.name.str() + where(value));
        }
        names.push_back(p.name);
      }
      check_unique(names, "parameter", value);
    } else if (k == ":precondition") {
      pre = &value;
    } else if (k == ":effect") {
      eff = &value;
    } else if (k == ":duration") {
      unsupported(key, ":durative-actions");
    } else {
      fail(key, "unknown action keyword '" + key.token + "'");
    }
  }
  checker.set_scope(a.parameters);
  if (pre != nullptr) a.precondition = parse_condition(*pre, &checker, false);
  if (eff != nullptr) {
    parse_effect_into(*eff, a.effect, checker);
    check_disjoint(a.effect.adds, a.effect.deletes, *eff);
  }
  return a;
}

Problem parse_problem_impl(std::string_view text, const Domain* domain) {
  SExpr root = read_sexpr(text);
  const SExpr& h = header(root, "problem");
  Problem p;
  p.name = to_name(h.items[1]);
  const SExpr* goal = nullptr;
  std::vector<const SExpr*> init_items;
  for (size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& s = root.items[i];
    auto [key, at] = section_key(s);
    if (key == ":domain") {
      if (s.items.size() != 2) fail(s, "expected (:domain <name>)");
      p.domain = to_name(s.items[1]);
    } else if (key == ":requirements") {
      for (size_t j = 1; j < s.items.size(); ++j) {
        std::string r = s.items[j].lower();
        if (!is_supported_requirement(r)) unsupported(s.items[j], r);
      }
    } else if (key == ":objects") {
      p.objects = parse_typed_list(s.items, 1, false);
    } else if (key == ":init") {
      for (size_t j = 1; j < s.items.size(); ++j) init_items.push_back(&s.items[j]);
    } else if (key == ":goal") {
      if (s.items.size() != 2) fail(s, "expected (:goal <condition>)");
      goal = &s.items[1];
    } else {
      reject_numeric_section(s, key);
      fail(*at, "unknown problem section '" + key + "'");
    }
  }
  if (p.domain.empty()) fail(root, "problem does not name its domain");

  std::vector<Symbol> names;
  for (const auto& o : p.objects) names.push_back(o.name);
  check_unique(names, "object", root);

  std::optional<Checker> checker;
  if (domain != nullptr) {
    if (p.domain != domain->name) {
      throw SemanticError("problem is for domain '" + p.domain.str() + "', expected '" +
                          domain->name.str() + "'");
    }
    for (const auto& o : p.objects) {
      if (!domain->has_type(o.type)) {
        throw SemanticError("unknown type '" + o.type.str() + "' for object " + o.name.str());
      }
      if (const auto* c = domain->find_constant(o.name); c != nullptr && c->type != o.type) {
        throw SemanticError("object '" + o.name.str() + "' redeclares constant with a different type");
      }
    }
    checker.emplace(*domain, &p);
  }

  for (const SExpr* e : init_items) {
    expect_list(*e, "init atom");
    if (!e->items.empty() && e->items[0].is_token("not")) fail(*e, "negative literal in init");
    Atom a = parse_atom_expr(*e);
    if (a.predicate == Symbol::equality()) unsupported(*e, ":numeric-fluents");
    if (!a.is_ground()) fail(*e, "init atom must be ground: " + a.str());
    if (checker) checker->check_atom(a, *e, true);
    p.init.push_back(std::move(a));
  }
  canonicalize_init(p.init);

  if (goal != nullptr) {
    p.goal = parse_condition(*goal, checker ? &*checker : nullptr, true);
    for (const auto& l : p.goal.literals) {
      if (!l.atom.is_ground()) fail(*goal, "goal must be ground: " + l.str());
    }
  }
  return p;
}

}  // namespace

bool is_supported_requirement(std::string_view requirement) {
  return std::find(kSupportedRequirements.begin(), kSupportedRequirements.end(), requirement) !=
         kSupportedRequirements.end();
}

Domain parse_domain(std::string_view text) {
  SExpr root = read_sexpr(text);
  const SExpr& h = header(root, "domain");
  Domain d;
  d.name = to_name(h.items[1]);

  std::vector<const SExpr*> actions;
  for (size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& s = root.items[i];
    auto [key, at] = section_key(s);
    if (key == ":requirements") {
      for (size_t j = 1; j < s.items.size(); ++j) {
        const SExpr& r = s.items[j];
        if (r.is_list) fail(r, "expected requirement keyword");
        std::string req = r.lower();
        if (!is_supported_requirement(req)) unsupported(r, req);
        d.requirements.push_back(Symbol(req.substr(req.front() == ':' ? 1 : 0)));
      }
    } else if (key == ":types") {
      d.types = parse_typed_list(s.items, 1, false);
      std::vector<Symbol> names;
      for (const auto& t : d.types) {
        if (t.name == object_type()) fail(s, "'object' cannot be redeclared");
        names.push_back(t.name);
      }
      check_unique(names, "type", s);
      // parents that are only mentioned after '-' become subtypes of object
      for (size_t j = 0, n = d.types.size(); j < n; ++j) {
        Symbol parent = d.types[j].type;
        if (!d.has_type(parent)) d.types.push_back({parent, object_type()});
      }
      check_types_acyclic(d, s);
    } else if (key == ":constants") {
      d.constants = parse_typed_list(s.items, 1, false);
      std::vector<Symbol> names;
      for (const auto& c : d.constants) {
        if (!d.has_type(c.type)) throw SemanticError("unknown type '" + c.type.str() + "'" + where(s));
        names.push_back(c.name);
      }
      check_unique(names, "constant", s);
    } else if (key == ":predicates") {
      std::vector<Symbol> names;
      for (size_t j = 1; j < s.items.size(); ++j) {
        const SExpr& pe = expect_list(s.items[j], "predicate declaration");
        if (pe.items.empty()) fail(pe, "empty predicate declaration");
        PredicateSignature sig;
        sig.name = to_name(pe.items[0]);
        sig.parameters = parse_typed_list(pe.items, 1, true);
        for (const auto& p : sig.parameters) {
          if (!d.has_type(p.type)) throw SemanticError("unknown type '" + p.type.str() + "'" + where(pe));
        }
        names.push_back(sig.name);
        d.predicates.push_back(std::move(sig));
      }
      check_unique(names, "predicate", s);
    } else if (key == ":action") {
      actions.push_back(&s);
    } else {
      reject_numeric_section(s, key);
      fail(*at, "unknown domain section '" + key + "'");
    }
  }
  // actions may precede declarations in the text; check them last
  std::vector<Symbol> names;
  for (const SExpr* a : actions) {
    d.actions.push_back(parse_action(*a, d));
    names.push_back(d.actions.back().name);
  }
  check_unique(names, "action", root);
  return d;
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  return parse_problem_impl(text, &domain);
}

Problem parse_problem_unchecked(std::string_view text) { return parse_problem_impl(text, nullptr); }

Atom parse_atom(std::string_view text) {
  SExpr e = read_sexpr(text);
  Atom a = parse_atom_expr(e);
  if (!a.is_ground()) fail(e, "atom must be ground: " + a.str());
  return a;
}

}  // namespace pddlforge::pddl
