#include "pddlforge/planner/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <sstream>

#include "pddlforge/pddl/symbol.hpp"
#include "pddlforge/validate/plan.hpp"

namespace pddlforge::planner {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void unrecognized(size_t line_no, const std::string& line) {
  throw ConversionError("line " + std::to_string(line_no) + ": unrecognized planner output '" + line + "'");
}

// `(name a b)` or `name a b`, optionally followed by a `[cost]` annotation.
std::optional<std::string> as_action(std::string text) {
  static const std::regex kCost(R"(\s*\[[^\]]*\]\s*$)");
  text = std::regex_replace(text, kCost, "");
  text = trim(text);
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') text = trim(text.substr(1, text.size() - 2));
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) {
    if (!pddl::Symbol::is_valid(t) || t.front() == '?') return std::nullopt;
    tokens.push_back(lower(t));
  }
  if (tokens.empty()) return std::nullopt;
  std::string out = "(";
  for (size_t i = 0; i < tokens.size(); ++i) out += (i ? " " : "") + tokens[i];
  return out + ")";
}

bool probe_noise(const std::string& line) {
  static const std::regex kNoise(
      R"(^(ff:|probe\b|probes\b|parsing\b|domain\b|problem\b|\.\.\.|time spent\b|total time\b|search time\b|plan length\b|plan cost\b|)"
      R"(cost\b|expanded\b|generated\b|evaluated\b|nodes\b|states\b|dead ends\b|solution found\b|found legal plan\b|)"
      R"(heuristic\b|landmarks?\b|memory\b|peak memory\b|instantiating\b|grounding\b|translating\b|preprocessing\b|)"
      R"(computing\b|checking\b|building\b|reachability\b|creating\b|searching\b|elapsed\b|max depth\b|goal\b|)"
      R"(initial\b|bye\b|done\b|[0-9.]+ seconds\b|[-=*_#. ]+$))",
      std::regex::icase);
  return std::regex_search(line, kNoise);
}

std::string normalize_probe(std::string_view raw) {
  static const std::regex kNumbered(R"(^(?:step\s+)?\d+(?:\.\d+)?\s*:\s*(.*)$)", std::regex::icase);
  std::istringstream in{std::string(raw)};
  std::string out;
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == ';') continue;
    std::smatch m;
    if (std::regex_match(line, m, kNumbered)) {
      auto action = as_action(m[1].str());
      if (!action) unrecognized(line_no, line);
      out += *action + "\n";
    } else if (line.front() == '(') {
      auto action = as_action(line);
      if (!action) unrecognized(line_no, line);
      out += *action + "\n";
    } else if (!probe_noise(line)) {
      unrecognized(line_no, line);
    }
  }
  return out;
}

std::string normalize_custom(std::string_view raw, const CustomDialect& custom) {
  std::regex action_re(custom.action_pattern);
  std::vector<std::regex> ignore;
  for (const auto& p : custom.ignore_patterns) ignore.emplace_back(p);
  std::istringstream in{std::string(raw)};
  std::string out;
  size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::smatch m;
    if (std::regex_search(line, m, action_re) && m.size() > 1) {
      auto action = as_action(m[1].str());
      if (!action) unrecognized(line_no, line);
      out += *action + "\n";
    } else if (std::none_of(ignore.begin(), ignore.end(),
                            [&](const std::regex& r) { return std::regex_search(line, r); })) {
      unrecognized(line_no, line);
    }
  }
  return out;
}

}  // namespace

std::string normalize_output(Dialect dialect, std::string_view raw, const CustomDialect& custom) {
  if (trim(raw).empty()) throw ConversionError("empty planner output");
  std::string out;
  switch (dialect) {
    case Dialect::val_native:
      try {
        validate::parse_plan(raw);
      } catch (const validate::PlanParseError& e) {
        throw ConversionError(e.what());
      }
      return std::string(raw);
    case Dialect::probe:
      out = normalize_probe(raw);
      break;
    case Dialect::custom:
      out = normalize_custom(raw, custom);
      break;
  }
  if (out.empty()) throw ConversionError("planner output contains no actions");
  return out;
}

}  // namespace pddlforge::planner
