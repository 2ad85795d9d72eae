#pragma once

#include <string_view>

#include "pddlforge/pddl/ast.hpp"
#include "pddlforge/pddl/errors.hpp"

namespace pddlforge::pddl {

/// Requirements accepted by the parser. `:adl` is accepted but only the
/// features of the other listed requirements are honored.
bool is_supported_requirement(std::string_view requirement);

Domain parse_domain(std::string_view text);

/// Parses and cross-checks against `domain` (signatures, arity, object types).
Problem parse_problem(std::string_view text, const Domain& domain);

/// Structural parse only, without a domain. Used where only the canonical form
/// matters (fingerprinting stored datasets).
Problem parse_problem_unchecked(std::string_view text);

/// Parses a single ground atom such as `(connected j1 link1 link2)`.
Atom parse_atom(std::string_view text);

}  // namespace pddlforge::pddl
