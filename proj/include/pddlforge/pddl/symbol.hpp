#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace pddlforge::pddl {

/// Case-insensitive PDDL identifier. Text is lowercased on construction and
/// restricted to letters, digits, '-' and '_' (a leading '?' marks a variable).
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  /// The `=` pseudo-predicate used for equality atoms.
  static Symbol equality();

  static bool is_valid(std::string_view text);

  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }
  bool is_variable() const { return !text_.empty() && text_.front() == '?'; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;

 private:
  struct Raw {};
  Symbol(Raw, std::string text) : text_(std::move(text)) {}

  std::string text_;
};

inline std::ostream& operator<<(std::ostream& os, const Symbol& s) { return os << s.str(); }

inline const Symbol& object_type() {
  static const Symbol kObject{"object"};
  return kObject;
}

}  // namespace pddlforge::pddl

template <>
struct std::hash<pddlforge::pddl::Symbol> {
  size_t operator()(const pddlforge::pddl::Symbol& s) const noexcept {
    return std::hash<std::string>{}(s.str());
  }
};
