#pragma once

#include <optional>
#include <span>
#include <string>

#include "pddlforge/pddl/ast.hpp"
#include "pddlforge/pddl/state.hpp"
#include "pddlforge/validate/plan.hpp"

namespace pddlforge::validate {

enum class FailureKind { unknown_action, bad_arity, type_error, precondition_failed, goal_unreached };

std::string_view to_string(FailureKind kind);

struct ValidationReport {
  bool valid = false;
  std::optional<size_t> failure_step;  // 0-based
  std::optional<FailureKind> failure_kind;
  std::optional<pddl::Literal> failed_literal;
  size_t steps_executed = 0;
  /// State reached after the executed prefix.
  pddl::State final_state;
  std::string detail;
};

/// Forward simulation from the initial state; stops at the first failure and
/// checks the goal only after the last step. Never throws on invalid plans.
ValidationReport validate(const pddl::Domain& domain, const pddl::Problem& problem, const Plan& plan);

struct ValidityRate {
  size_t valid = 0;
  size_t total = 0;

  /// Percentage rounded to one decimal.
  double percent() const;
  /// `66.1`
  std::string str() const;
};

/// Throws pddlforge::Error on an empty list.
ValidityRate validity_rate(std::span<const ValidationReport> reports);
ValidityRate validity_rate(size_t valid, size_t total);

/// `index verdict kind step` log line.
std::string log_line(size_t index, const ValidationReport& report);

}  // namespace pddlforge::validate
