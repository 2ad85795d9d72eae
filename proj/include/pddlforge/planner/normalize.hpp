#pragma once

#include <string>
#include <string_view>

#include "pddlforge/error.hpp"
#include "pddlforge/planner/adapter.hpp"

namespace pddlforge::planner {

/// Planner output that is neither an action line nor known noise.
class ConversionError : public Error {
 public:
  using Error::Error;
};

/// Converts raw planner output into VAL-style plan text, one `(action args)`
/// per line. val_native input is returned unchanged after checking that it
/// parses. The probe dialect accepts FF-style listings (`step 0: A B`,
/// `1: A B`, bare or parenthesized actions, any case) and drops search
/// statistics and banner lines. Throws ConversionError, also on empty input.
std::string normalize_output(Dialect dialect, std::string_view raw, const CustomDialect& custom = {});

}  // namespace pddlforge::planner
