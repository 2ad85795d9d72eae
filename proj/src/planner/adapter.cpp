#include "pddlforge/planner/adapter.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>

#include <json.hpp>

#include "pddlforge/util/io.hpp"

namespace pddlforge::planner {

std::string_view to_string(OutputMode mode) {
  return mode == OutputMode::plan_file ? "plan_file" : "stdout";
}

std::string_view to_string(Dialect dialect) {
  switch (dialect) {
    case Dialect::val_native: return "val_native";
    case Dialect::probe: return "probe";
    case Dialect::custom: return "custom";
  }
  return "?";
}

PlannerAdapter internal_adapter() {
  PlannerAdapter a;
  a.name = "internal";
  a.executable = "internal";
  a.arguments = {"{domain}", "{problem}"};
  a.output = OutputMode::standard_output;
  return a;
}

namespace {

bool mentions(const std::vector<std::string>& args, std::string_view placeholder) {
  for (const auto& a : args) {
    if (a.find(placeholder) != std::string::npos) return true;
  }
  return false;
}

void check_regex(const std::string& pattern, const std::string& what, const std::string& adapter) {
  try {
    std::regex re(pattern);
  } catch (const std::regex_error& e) {
    throw AdapterError("adapter '" + adapter + "': invalid " + what + " '" + pattern + "': " + e.what());
  }
}

}  // namespace

void check_adapter(const PlannerAdapter& a) {
  std::string who = "adapter '" + a.name + "': ";
  if (a.name.empty()) throw AdapterError("adapter without a name");
  if (a.executable.empty()) throw AdapterError(who + "no executable");
  if (!(a.timeout_s > 0)) throw AdapterError(who + "timeout must be positive");
  if (!mentions(a.arguments, "{domain}") || !mentions(a.arguments, "{problem}")) {
    throw AdapterError(who + "argument template must contain {domain} and {problem}");
  }
  if (a.output == OutputMode::plan_file && !a.is_internal() && !mentions(a.arguments, "{output}")) {
    throw AdapterError(who + "plan_file output needs {output} in the argument template");
  }
  if (!a.no_solution_pattern.empty()) check_regex(a.no_solution_pattern, "no_solution_pattern", a.name);
  if (a.dialect == Dialect::custom) {
    if (a.custom.action_pattern.empty()) throw AdapterError(who + "custom dialect needs an action_pattern");
    check_regex(a.custom.action_pattern, "action_pattern", a.name);
    for (const auto& p : a.custom.ignore_patterns) check_regex(p, "ignore pattern", a.name);
  }
}

AdapterRegistry::AdapterRegistry() { adapters_.emplace("internal", internal_adapter()); }

namespace {

PlannerAdapter adapter_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> kKeys{"name",      "executable",          "arguments", "output", "dialect",
                                              "timeout_s", "no_solution_pattern", "custom",    "max_depth",
                                              "max_expansions"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(kKeys.begin(), kKeys.end(), it.key()) == kKeys.end()) {
      throw AdapterError("unknown adapter key '" + it.key() + "'");
    }
  }
  PlannerAdapter a;
  a.name = j.at("name").get<std::string>();
  a.executable = j.at("executable").get<std::string>();
  a.arguments = j.at("arguments").get<std::vector<std::string>>();
  std::string output = j.value("output", "plan_file");
  if (output == "plan_file") a.output = OutputMode::plan_file;
  else if (output == "stdout") a.output = OutputMode::standard_output;
  else throw AdapterError("adapter '" + a.name + "': output must be plan_file or stdout");
  std::string dialect = j.value("dialect", "val_native");
  if (dialect == "val_native") a.dialect = Dialect::val_native;
  else if (dialect == "probe") a.dialect = Dialect::probe;
  else if (dialect == "custom") a.dialect = Dialect::custom;
  else throw AdapterError("adapter '" + a.name + "': unknown dialect '" + dialect + "'");
  a.timeout_s = j.value("timeout_s", a.timeout_s);
  a.no_solution_pattern = j.value("no_solution_pattern", "");
  if (j.contains("custom")) {
    a.custom.action_pattern = j["custom"].at("action_pattern").get<std::string>();
    a.custom.ignore_patterns = j["custom"].value("ignore_patterns", std::vector<std::string>{});
  }
  a.max_depth = j.value("max_depth", a.max_depth);
  a.max_expansions = j.value("max_expansions", a.max_expansions);
  return a;
}

}  // namespace

AdapterRegistry AdapterRegistry::parse(std::string_view json_text) {
  AdapterRegistry r;
  try {
    auto doc = nlohmann::json::parse(json_text);
    for (const auto& j : doc.at("adapters")) r.add(adapter_from_json(j));
  } catch (const nlohmann::json::exception& e) {
    throw AdapterError(std::string("invalid adapter registry: ") + e.what());
  }
  return r;
}

AdapterRegistry AdapterRegistry::load(const fs::path& path) { return parse(util::read_file(path)); }

std::optional<fs::path> AdapterRegistry::default_path() {
  const char* env = std::getenv("PDDLFORGE_ADAPTERS");
  if (!env || !*env) return std::nullopt;
  return fs::path(env);
}

void AdapterRegistry::add(PlannerAdapter adapter) {
  check_adapter(adapter);
  std::string name = adapter.name;
  adapters_.insert_or_assign(name, std::move(adapter));
}

const PlannerAdapter& AdapterRegistry::get(const std::string& name) const {
  auto it = adapters_.find(name);
  if (it == adapters_.end()) throw AdapterError("no planner adapter named '" + name + "'");
  return it->second;
}

std::vector<std::string> AdapterRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : adapters_) out.push_back(name);
  return out;
}

}  // namespace pddlforge::planner
