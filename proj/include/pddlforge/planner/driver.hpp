#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pddlforge/planner/adapter.hpp"
#include "pddlforge/planner/result.hpp"
#include "pddlforge/stats.hpp"

namespace pddlforge::planner {

namespace fs = std::filesystem;

class ExecutableMissing : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

/// Runs one planner on one domain/problem pair. External planners run in their
/// own process group, which is killed with SIGKILL at the timeout. Throws
/// ExecutableMissing and AdapterError for unknown placeholders; every other
/// failure is reported through the result status.
PlanResult solve(const PlannerAdapter& adapter, const fs::path& domain_file, const fs::path& problem_file,
                 std::optional<double> timeout_s = std::nullopt);

/// Where plan_batch reads and writes inside a session directory.
struct PlanningPaths {
  fs::path root;

  fs::path domain() const { return root / "domain.pddl"; }
  fs::path problems() const { return root / "problems"; }
  fs::path plans() const { return root / "plans"; }
  fs::path log() const { return root / "logs" / "planning.log"; }
};

/// One line of planning.log: `<problem> <status> <wall_time> <plan_length|->`.
struct PlanningLogEntry {
  std::string problem;
  PlanStatus status = PlanStatus::crashed;
  double wall_time = 0;
  std::optional<size_t> plan_length;

  std::string str() const;
  static PlanningLogEntry parse(const std::string& line);
};

std::vector<PlanningLogEntry> read_planning_log(const fs::path& path);

struct BatchPlanOptions {
  std::optional<double> timeout_s;
  size_t workers = 1;
};

struct PlanBatchReport {
  /// Problems attempted by this call, in problem order.
  std::vector<PlanningLogEntry> attempted;
  size_t solved = 0;
  size_t timeouts = 0;
  size_t no_solution = 0;
  size_t crashed = 0;
  /// Problems of the whole session without a plan: how many replacements the
  /// generator must produce.
  size_t shortfall = 0;
  /// Wall time over the problems attempted by this call.
  Summary wall_time;
};

/// Attempts every problem of the session that has no planning.log entry yet.
/// Solved plans are validated against their problem; a plan that fails is
/// recorded as crashed. Plans go to plans/<problem>.plan.
PlanBatchReport plan_batch(const PlannerAdapter& adapter, const PlanningPaths& session,
                           const BatchPlanOptions& options = {});

}  // namespace pddlforge::planner
