#pragma once

#include <initializer_list>
#include <optional>
#include <set>
#include <span>

#include "pddlforge/pddl/ast.hpp"
#include "pddlforge/pddl/errors.hpp"

namespace pddlforge::pddl {

/// Closed-world set of ground atoms.
class State {
 public:
  using const_iterator = std::set<Atom>::const_iterator;

  State() = default;
  explicit State(std::span<const Atom> atoms);
  State(std::initializer_list<Atom> atoms);

  bool contains(const Atom& atom) const { return atoms_.contains(atom); }
  size_t size() const { return atoms_.size(); }
  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }
  const std::set<Atom>& atoms() const { return atoms_; }

  void insert(const Atom& atom) { atoms_.insert(atom); }
  void erase(const Atom& atom) { atoms_.erase(atom); }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::set<Atom> atoms_;
};

struct GroundAction {
  Symbol schema;
  std::vector<Symbol> args;
  Condition precondition;
  Effect effect;

  /// `(schema a b)`
  std::string str() const;
};

State initial_state(const Problem& problem);

/// Closed-world truth of a ground literal. Throws NonGroundError.
bool holds(const State& state, const Literal& literal);
bool holds(const State& state, const Condition& condition);

/// First literal of `condition` that does not hold, if any.
std::optional<Literal> first_unsatisfied(const State& state, const Condition& condition);

/// Successor state. Conditional effects are evaluated on the pre-state; all
/// deletes are applied before all adds. Throws PreconditionViolated.
State apply(const State& state, const GroundAction& action);

}  // namespace pddlforge::pddl
