#include "pddlforge/pddl/state.hpp"

namespace pddlforge::pddl {

State::State(std::span<const Atom> atoms) : atoms_(atoms.begin(), atoms.end()) {}

State::State(std::initializer_list<Atom> atoms) : atoms_(atoms) {}

std::string GroundAction::str() const {
  std::string out = "(" + schema.str();
  for (const auto& a : args) out += " " + a.str();
  return out + ")";
}

State initial_state(const Problem& problem) { return State(problem.init); }

bool holds(const State& state, const Literal& literal) {
  if (!literal.atom.is_ground()) throw NonGroundError(literal);
  bool truth = literal.is_equality() ? literal.atom.args.at(0) == literal.atom.args.at(1)
                                     : state.contains(literal.atom);
  return truth != literal.negated;
}

bool holds(const State& state, const Condition& condition) {
  return !first_unsatisfied(state, condition).has_value();
}

std::optional<Literal> first_unsatisfied(const State& state, const Condition& condition) {
  for (const auto& l : condition.literals) {
    if (!holds(state, l)) return l;
  }
  return std::nullopt;
}

State apply(const State& state, const GroundAction& action) {
  if (auto failed = first_unsatisfied(state, action.precondition)) {
    throw PreconditionViolated(std::move(*failed));
  }
  std::vector<const Atom*> adds;
  std::vector<const Atom*> dels;
  for (const auto& a : action.effect.adds) adds.push_back(&a);
  for (const auto& a : action.effect.deletes) dels.push_back(&a);
  for (const auto& ce : action.effect.conditional) {
    if (!holds(state, ce.condition)) continue;
    for (const auto& a : ce.adds) adds.push_back(&a);
    for (const auto& a : ce.deletes) dels.push_back(&a);
  }
  State next = state;
  for (const Atom* a : dels) next.erase(*a);
  for (const Atom* a : adds) next.insert(*a);
  return next;
}

}  // namespace pddlforge::pddl
