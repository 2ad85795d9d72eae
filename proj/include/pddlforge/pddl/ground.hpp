#pragma once

#include <span>
#include <vector>

#include "pddlforge/pddl/ast.hpp"
#include "pddlforge/pddl/state.hpp"

namespace pddlforge::pddl {

/// Substitutes `args` for the schema parameters. No type checking.
GroundAction instantiate(const ActionSchema& schema, std::span<const Symbol> args);

/// Problem objects and domain constants whose type is `type` or a subtype,
/// sorted by name.
std::vector<Symbol> objects_of_type(const Domain& domain, const Problem& problem,
                                    const Symbol& type);

/// Every type-consistent instantiation, in schema order and then
/// lexicographic order of argument tuples.
std::vector<GroundAction> ground_actions(const Domain& domain, const Problem& problem);

}  // namespace pddlforge::pddl
