#pragma once

#include <string>

#include "pddlforge/pddl/ast.hpp"

namespace pddlforge::pddl {

// Canonical, deterministic text. Lowercase; init one atom per line in text
// order; goal conjuncts in authored order; parameters in declared order with
// consecutive equal types grouped.
std::string serialize_domain(const Domain& domain);
std::string serialize_problem(const Problem& problem);

std::string to_string(const Condition& condition);

}  // namespace pddlforge::pddl
