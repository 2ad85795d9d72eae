#include "pddlforge/pddl/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pddlforge::pddl {

namespace {

bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

}  // namespace

bool Symbol::is_valid(std::string_view text) {
  if (!text.empty() && text.front() == '?') text.remove_prefix(1);
  return !text.empty() && std::all_of(text.begin(), text.end(), is_symbol_char);
}

Symbol::Symbol(std::string_view text) {
  if (!is_valid(text)) {
    throw std::invalid_argument("invalid PDDL identifier '" + std::string(text) + "'");
  }
  text_.reserve(text.size());
  for (char c : text) text_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
}

Symbol Symbol::equality() {
  static const Symbol kEq{Raw{}, "="};
  return kEq;
}

}  // namespace pddlforge::pddl
