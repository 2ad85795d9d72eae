#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pddlforge/validate/plan.hpp"

namespace pddlforge::planner {

enum class PlanStatus { solved, timeout, no_solution, crashed };

std::string_view to_string(PlanStatus status);

struct PlanResult {
  PlanStatus status = PlanStatus::crashed;
  /// Present iff status is solved.
  std::optional<validate::Plan> plan;
  /// Seconds, measured by the driver around the planner run.
  double wall_time = 0;
  std::string raw_output;
  std::string diagnostic;
  /// Internal planner only: the expansion budget ran out before the search
  /// space was exhausted.
  bool budget_exhausted = false;
};

}  // namespace pddlforge::planner
