#include "pddlforge/pddl/ground.hpp"

#include <algorithm>
#include <unordered_map>

namespace pddlforge::pddl {

namespace {

using Binding = std::unordered_map<Symbol, Symbol>;

Atom substitute(const Atom& atom, const Binding& b) {
  Atom out{atom.predicate, {}};
  out.args.reserve(atom.args.size());
  for (const auto& a : atom.args) {
    auto it = a.is_variable() ? b.find(a) : b.end();
    out.args.push_back(it == b.end() ? a : it->second);
  }
  return out;
}

Condition substitute(const Condition& c, const Binding& b) {
  Condition out;
  out.literals.reserve(c.literals.size());
  for (const auto& l : c.literals) out.literals.push_back({substitute(l.atom, b), l.negated});
  return out;
}

std::vector<Atom> substitute(const std::vector<Atom>& atoms, const Binding& b) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(substitute(a, b));
  return out;
}

}  // namespace

GroundAction instantiate(const ActionSchema& schema, std::span<const Symbol> args) {
  Binding b;
  for (size_t i = 0; i < schema.parameters.size() && i < args.size(); ++i) {
    b.emplace(schema.parameters[i].name, args[i]);
  }
  GroundAction g;
  g.schema = schema.name;
  g.args.assign(args.begin(), args.end());
  g.precondition = substitute(schema.precondition, b);
  g.effect.adds = substitute(schema.effect.adds, b);
  g.effect.deletes = substitute(schema.effect.deletes, b);
  for (const auto& ce : schema.effect.conditional) {
    g.effect.conditional.push_back(
        {substitute(ce.condition, b), substitute(ce.adds, b), substitute(ce.deletes, b)});
  }
  return g;
}

std::vector<Symbol> objects_of_type(const Domain& domain, const Problem& problem, const Symbol& type) {
  std::vector<Symbol> out;
  for (const auto& o : problem.objects) {
    if (domain.is_subtype(o.type, type)) out.push_back(o.name);
  }
  for (const auto& c : domain.constants) {
    if (domain.is_subtype(c.type, type)) out.push_back(c.name);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GroundAction> ground_actions(const Domain& domain, const Problem& problem) {
  std::vector<GroundAction> out;
  for (const auto& schema : domain.actions) {
    std::vector<std::vector<Symbol>> candidates;
    bool empty = false;
    for (const auto& p : schema.parameters) {
      candidates.push_back(objects_of_type(domain, problem, p.type));
      empty = empty || candidates.back().empty();
    }
    if (empty) continue;
    // odometer over candidate lists, last parameter fastest
    std::vector<size_t> idx(candidates.size(), 0);
    std::vector<Symbol> args(candidates.size());
    while (true) {
      for (size_t i = 0; i < idx.size(); ++i) args[i] = candidates[i][idx[i]];
      out.push_back(instantiate(schema, args));
      bool done = true;
      for (size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < candidates[k].size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

}  // namespace pddlforge::pddl
