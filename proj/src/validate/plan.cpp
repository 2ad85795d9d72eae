#include "pddlforge/validate/plan.hpp"

#include <cctype>
#include <sstream>

namespace pddlforge::validate {

std::string PlanStep::str() const {
  std::string out = "(" + action.str();
  for (const auto& a : args) out += " " + a.str();
  return out + ")";
}

std::string Plan::str() const {
  std::string out;
  for (const auto& s : steps) out += s.str() + "\n";
  return out;
}

PlanParseError::PlanParseError(const std::string& message, int line)
    : Error("plan line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Plan parse_plan(std::string_view text) {
  Plan plan;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto c = raw.find(';'); c != std::string_view::npos) raw = raw.substr(0, c);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    // optional `<time>:` prefix
    if (line.front() != '(') {
      size_t colon = line.find(':');
      size_t paren = line.find('(');
      if (colon == std::string_view::npos || (paren != std::string_view::npos && paren < colon)) {
        throw PlanParseError("expected '(action args...)'", line_no);
      }
      std::string_view stamp = trim(line.substr(0, colon));
      bool numeric = !stamp.empty();
      for (char ch : stamp) numeric = numeric && (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.');
      if (!numeric) throw PlanParseError("malformed time stamp '" + std::string(stamp) + "'", line_no);
      line = trim(line.substr(colon + 1));
      plan.source_format = PlanFormat::timestamped;
    }
    if (line.empty() || line.front() != '(') throw PlanParseError("expected '('", line_no);
    size_t close = line.find(')');
    if (close == std::string_view::npos) throw PlanParseError("missing ')'", line_no);
    std::string_view rest = trim(line.substr(close + 1));
    if (!rest.empty() && !(rest.front() == '[' && rest.back() == ']')) {
      throw PlanParseError("unexpected text after action", line_no);
    }
    std::istringstream body{std::string(line.substr(1, close - 1))};
    std::string tok;
    PlanStep step;
    bool first = true;
    while (body >> tok) {
      if (tok.find('(') != std::string::npos) throw PlanParseError("nested '('", line_no);
      if (!Symbol::is_valid(tok) || tok.front() == '?') {
        throw PlanParseError("invalid identifier '" + tok + "'", line_no);
      }
      if (first) {
        step.action = Symbol(tok);
        first = false;
      } else {
        step.args.emplace_back(tok);
      }
    }
    if (first) throw PlanParseError("empty action", line_no);
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

}  // namespace pddlforge::validate
