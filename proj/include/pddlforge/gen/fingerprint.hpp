#pragma once

#include <string>

#include "pddlforge/pddl/ast.hpp"

namespace pddlforge::gen {

/// 32 hex digits of BLAKE2b-128 over the canonical serialization of `problem`
/// with its name replaced by a fixed placeholder, so problems that differ only
/// in name are duplicates.
std::string fingerprint(const pddl::Problem& problem);

}  // namespace pddlforge::gen
