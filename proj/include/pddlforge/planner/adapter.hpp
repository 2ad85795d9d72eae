#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pddlforge/error.hpp"

namespace pddlforge::planner {

namespace fs = std::filesystem;

enum class OutputMode { plan_file, standard_output };
enum class Dialect { val_native, probe, custom };

std::string_view to_string(OutputMode mode);
std::string_view to_string(Dialect dialect);

/// Line grammar for the `custom` dialect. Group 1 of `action_pattern` is the
/// action, either `(name args...)` or `name args...`.
struct CustomDialect {
  std::string action_pattern;
  std::vector<std::string> ignore_patterns;
};

/// How to run one planner. `arguments` may use {domain}, {problem} and
/// {output}; the executable name `internal` selects the in-process reference
/// planner.
struct PlannerAdapter {
  std::string name;
  std::string executable;
  std::vector<std::string> arguments;
  OutputMode output = OutputMode::plan_file;
  Dialect dialect = Dialect::val_native;
  double timeout_s = 60;
  /// Regex searched in the planner's console output; a match means the
  /// planner proved the problem unsolvable.
  std::string no_solution_pattern;
  CustomDialect custom;
  /// Search bounds for the internal planner.
  size_t max_depth = 64;
  size_t max_expansions = 1'000'000;

  bool is_internal() const { return executable == "internal"; }
};

class AdapterError : public Error {
 public:
  using Error::Error;
};

/// The built-in adapter named `internal`.
PlannerAdapter internal_adapter();

/// Checks the invariants (template placeholders, positive timeout, dialect
/// patterns). Throws AdapterError.
void check_adapter(const PlannerAdapter& adapter);

/// Registry documents look like `{"adapters": [{"name": ..., ...}]}`. The
/// `internal` adapter is always present unless a document overrides it.
class AdapterRegistry {
 public:
  AdapterRegistry();

  static AdapterRegistry parse(std::string_view json_text);
  static AdapterRegistry load(const fs::path& path);
  /// Path from $PDDLFORGE_ADAPTERS, if set.
  static std::optional<fs::path> default_path();

  void add(PlannerAdapter adapter);
  const PlannerAdapter& get(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, PlannerAdapter> adapters_;
};

}  // namespace pddlforge::planner
