#pragma once

#include <chrono>
#include <optional>

#include "pddlforge/pddl/ast.hpp"
#include "pddlforge/planner/result.hpp"

namespace pddlforge::planner {

struct SearchLimits {
  size_t max_depth = 64;
  size_t max_expansions = 1'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Breadth-first search over ground states. Returns a shortest plan within
/// `max_depth`; ties are broken by ground_actions order. An exhausted budget
/// gives no_solution with `budget_exhausted` set, a passed deadline gives
/// timeout.
PlanResult reference_plan(const pddl::Domain& domain, const pddl::Problem& problem, const SearchLimits& limits = {});

}  // namespace pddlforge::planner
