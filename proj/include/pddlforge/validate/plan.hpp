#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pddlforge/error.hpp"
#include "pddlforge/pddl/symbol.hpp"

namespace pddlforge::validate {

using pddl::Symbol;

struct PlanStep {
  Symbol action;
  std::vector<Symbol> args;

  std::string str() const;
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

enum class PlanFormat { bare, timestamped };

struct Plan {
  std::vector<PlanStep> steps;
  PlanFormat source_format = PlanFormat::bare;

  size_t size() const { return steps.size(); }
  /// VAL-style text, one `(action args...)` per line.
  std::string str() const;
};

class PlanParseError : public Error {
 public:
  PlanParseError(const std::string& message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

/// Accepts `(a x y)` and `0: (a x y)` lines, with an optional trailing
/// `[duration]`. Blank lines and `;` comments are ignored.
Plan parse_plan(std::string_view text);

}  // namespace pddlforge::validate
