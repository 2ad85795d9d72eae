#include "pddlforge/pddl/ast.hpp"

#include <algorithm>

#include "pddlforge/pddl/errors.hpp"

namespace pddlforge::pddl {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Symbol& s) { return s.is_variable(); });
}

std::string Atom::str() const {
  std::string out = "(" + predicate.str();
  for (const auto& a : args) {
    out += ' ';
    out += a.str();
  }
  out += ')';
  return out;
}

bool text_less(const Atom& a, const Atom& b) { return a.str() < b.str(); }

std::string Literal::str() const { return negated ? "(not " + atom.str() + ")" : atom.str(); }

size_t Effect::add_count() const {
  size_t n = adds.size();
  for (const auto& ce : conditional) n += ce.adds.size();
  return n;
}

const PredicateSignature* Domain::find_predicate(const Symbol& name) const {
  auto it = std::find_if(predicates.begin(), predicates.end(),
                         [&](const PredicateSignature& p) { return p.name == name; });
  return it == predicates.end() ? nullptr : &*it;
}

const ActionSchema* Domain::find_action(const Symbol& name) const {
  auto it = std::find_if(actions.begin(), actions.end(),
                         [&](const ActionSchema& a) { return a.name == name; });
  return it == actions.end() ? nullptr : &*it;
}

const TypedName* Domain::find_constant(const Symbol& name) const {
  auto it = std::find_if(constants.begin(), constants.end(),
                         [&](const TypedName& c) { return c.name == name; });
  return it == constants.end() ? nullptr : &*it;
}

bool Domain::has_type(const Symbol& type) const {
  if (type == object_type()) return true;
  return std::any_of(types.begin(), types.end(), [&](const TypedName& t) { return t.name == type; });
}

bool Domain::is_subtype(const Symbol& sub, const Symbol& super) const {
  if (super == object_type()) return true;
  Symbol current = sub;
  // the hierarchy is acyclic (checked at parse time) so this terminates
  for (size_t guard = 0; guard <= types.size(); ++guard) {
    if (current == super) return true;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypedName& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->type;
  }
  return false;
}

const TypedName* Problem::find_object(const Symbol& name) const {
  auto it = std::find_if(objects.begin(), objects.end(),
                         [&](const TypedName& o) { return o.name == name; });
  return it == objects.end() ? nullptr : &*it;
}

void canonicalize_init(std::vector<Atom>& init) {
  std::vector<std::pair<std::string, Atom>> keyed;
  keyed.reserve(init.size());
  for (auto& a : init) keyed.emplace_back(a.str(), std::move(a));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& x, const auto& y) { return x.first == y.first; }),
              keyed.end());
  init.clear();
  for (auto& [_, a] : keyed) init.push_back(std::move(a));
}

std::optional<Symbol> object_type_of(const Domain& domain, const Problem& problem,
                                     const Symbol& name) {
  if (const auto* o = problem.find_object(name)) return o->type;
  if (const auto* c = domain.find_constant(name)) return c->type;
  return std::nullopt;
}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

UnsupportedFeature::UnsupportedFeature(std::string feature, int line, int column)
    : ParseError("unsupported feature '" + feature + "'", line, column), feature_(std::move(feature)) {}

NonGroundError::NonGroundError(const Literal& literal)
    : Error("literal is not ground: " + literal.str()) {}

PreconditionViolated::PreconditionViolated(Literal failed)
    : Error("precondition violated: " + failed.str()), failed_(std::move(failed)) {}

}  // namespace pddlforge::pddl
