#include "pddlforge/validate/validator.hpp"

#include <cstdio>

#include "pddlforge/pddl/ground.hpp"

namespace pddlforge::validate {

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::unknown_action: return "unknown_action";
    case FailureKind::bad_arity: return "bad_arity";
    case FailureKind::type_error: return "type_error";
    case FailureKind::precondition_failed: return "precondition_failed";
    case FailureKind::goal_unreached: return "goal_unreached";
  }
  return "?";
}

namespace {

ValidationReport fail(ValidationReport r, size_t step, FailureKind kind, std::string detail) {
  r.valid = false;
  r.failure_step = step;
  r.failure_kind = kind;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

ValidationReport validate(const pddl::Domain& domain, const pddl::Problem& problem, const Plan& plan) {
  ValidationReport r;
  r.final_state = pddl::initial_state(problem);
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const PlanStep& step = plan.steps[i];
    const pddl::ActionSchema* schema = domain.find_action(step.action);
    if (schema == nullptr) {
      return fail(std::move(r), i, FailureKind::unknown_action, "unknown action '" + step.action.str() + "'");
    }
    if (schema->parameters.size() != step.args.size()) {
      return fail(std::move(r), i, FailureKind::bad_arity,
                  step.str() + ": expected " + std::to_string(schema->parameters.size()) + " argument(s)");
    }
    for (size_t k = 0; k < step.args.size(); ++k) {
      auto type = pddl::object_type_of(domain, problem, step.args[k]);
      if (!type) {
        return fail(std::move(r), i, FailureKind::type_error,
                    step.str() + ": unknown object '" + step.args[k].str() + "'");
      }
      if (!domain.is_subtype(*type, schema->parameters[k].type)) {
        return fail(std::move(r), i, FailureKind::type_error,
                    step.str() + ": '" + step.args[k].str() + "' is not a " + schema->parameters[k].type.str());
      }
    }
    pddl::GroundAction action = pddl::instantiate(*schema, step.args);
    if (auto failed = pddl::first_unsatisfied(r.final_state, action.precondition)) {
      r.failed_literal = *failed;
      return fail(std::move(r), i, FailureKind::precondition_failed,
                  step.str() + ": precondition " + failed->str() + " does not hold");
    }
    r.final_state = pddl::apply(r.final_state, action);
    ++r.steps_executed;
  }
  if (auto missing = pddl::first_unsatisfied(r.final_state, problem.goal)) {
    r.valid = false;
    r.failure_kind = FailureKind::goal_unreached;
    r.failed_literal = *missing;
    r.detail = "goal " + missing->str() + " not satisfied";
    return r;
  }
  r.valid = true;
  return r;
}

double ValidityRate::percent() const {
  if (total == 0) return 0.0;
  // round half up on tenths using integer arithmetic
  size_t tenths = (valid * 2000 + total) / (2 * total);
  return static_cast<double>(tenths) / 10.0;
}

std::string ValidityRate::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", percent());
  return buf;
}

ValidityRate validity_rate(size_t valid, size_t total) {
  if (total == 0) throw Error("validity rate of an empty report list");
  return {valid, total};
}

ValidityRate validity_rate(std::span<const ValidationReport> reports) {
  size_t valid = 0;
  for (const auto& r : reports) valid += r.valid ? 1 : 0;
  return validity_rate(valid, reports.size());
}

std::string log_line(size_t index, const ValidationReport& report) {
  std::string out = std::to_string(index) + (report.valid ? " valid" : " invalid");
  out += " ";
  out += report.failure_kind ? std::string(to_string(*report.failure_kind)) : "-";
  out += " ";
  out += report.failure_step ? std::to_string(*report.failure_step) : "-";
  return out;
}

}  // namespace pddlforge::validate
