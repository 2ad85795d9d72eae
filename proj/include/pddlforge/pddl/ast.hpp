#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pddlforge/error.hpp"
#include "pddlforge/pddl/symbol.hpp"

namespace pddlforge::pddl {

/// `name - type` pair used for parameters, objects, constants and type
/// declarations (where `type` is the parent type).
struct TypedName {
  Symbol name;
  Symbol type = object_type();

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct PredicateSignature {
  Symbol name;
  std::vector<TypedName> parameters;

  size_t arity() const { return parameters.size(); }
  friend bool operator==(const PredicateSignature&, const PredicateSignature&) = default;
};

struct Atom {
  Symbol predicate;
  std::vector<Symbol> args;

  bool is_ground() const;
  /// `(pred a b)`
  std::string str() const;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Orders atoms by their rendered text, the order used for canonical init
/// sections.
bool text_less(const Atom& a, const Atom& b);

struct Literal {
  Atom atom;
  bool negated = false;

  bool is_equality() const { return atom.predicate == Symbol::equality(); }
  std::string str() const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Conjunction of literals. Equality atoms use the `=` predicate.
struct Condition {
  std::vector<Literal> literals;

  bool empty() const { return literals.empty(); }
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct ConditionalEffect {
  Condition condition;
  std::vector<Atom> adds;
  std::vector<Atom> deletes;

  friend bool operator==(const ConditionalEffect&, const ConditionalEffect&) = default;
};

struct Effect {
  std::vector<Atom> adds;
  std::vector<Atom> deletes;
  std::vector<ConditionalEffect> conditional;

  size_t add_count() const;
  friend bool operator==(const Effect&, const Effect&) = default;
};

struct ActionSchema {
  Symbol name;
  std::vector<TypedName> parameters;
  Condition precondition;
  Effect effect;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Domain {
  Symbol name;
  std::vector<Symbol> requirements;
  /// Declared types with their parent; `object` is implicit.
  std::vector<TypedName> types;
  std::vector<TypedName> constants;
  std::vector<PredicateSignature> predicates;
  std::vector<ActionSchema> actions;

  const PredicateSignature* find_predicate(const Symbol& name) const;
  const ActionSchema* find_action(const Symbol& name) const;
  const TypedName* find_constant(const Symbol& name) const;
  bool has_type(const Symbol& type) const;
  /// Reflexive, transitive subtype test over the declared hierarchy.
  bool is_subtype(const Symbol& sub, const Symbol& super) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Problem {
  Symbol name;
  Symbol domain;
  std::vector<TypedName> objects;
  /// Ground atoms, unique and sorted by `text_less`.
  std::vector<Atom> init;
  Condition goal;

  const TypedName* find_object(const Symbol& name) const;
  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Sorts by text and removes duplicates, giving init its set semantics.
void canonicalize_init(std::vector<Atom>& init);

/// Type of `name` as a problem object or domain constant, if declared.
std::optional<Symbol> object_type_of(const Domain& domain, const Problem& problem,
                                     const Symbol& name);

}  // namespace pddlforge::pddl
