#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pddlforge::pddl {

/// Minimal S-expression tree with source positions.
struct SExpr {
  bool is_list = false;
  std::string token;  // raw text for leaves
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_token() const { return !is_list; }
  bool is_token(std::string_view lowercase) const;
  /// Leaf text lowercased.
  std::string lower() const;
};

/// Reads exactly one top-level expression; `;` comments run to end of line.
SExpr read_sexpr(std::string_view text);

}  // namespace pddlforge::pddl
