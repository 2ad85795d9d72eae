#include "support/oracle.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

using pddlforge::pddl::Atom;
using pddlforge::pddl::Condition;
using pddlforge::pddl::Domain;
using pddlforge::pddl::Problem;

namespace {

using Env = std::map<std::string, std::string>;

std::string render(const Atom& a, const Env& env) {
  std::string out = "(" + a.predicate.str();
  for (const auto& arg : a.args) {
    auto it = env.find(arg.str());
    out += " " + (it == env.end() ? arg.str() : it->second);
  }
  return out + ")";
}

bool eval(const Condition& c, const Env& env, const AtomSet& state) {
  for (const auto& lit : c.literals) {
    bool truth;
    if (lit.atom.predicate.str() == "=") {
      auto value = [&](const pddlforge::pddl::Symbol& s) {
        auto it = env.find(s.str());
        return it == env.end() ? s.str() : it->second;
      };
      truth = value(lit.atom.args[0]) == value(lit.atom.args[1]);
    } else {
      truth = state.count(render(lit.atom, env)) > 0;
    }
    if (truth == lit.negated) return false;
  }
  return true;
}

std::string parent_of(const Domain& d, const std::string& type) {
  for (const auto& t : d.types) {
    if (t.name.str() == type) return t.type.str();
  }
  return "";
}

bool type_ok(const Domain& d, std::string type, const std::string& want) {
  if (want == "object") return true;
  while (!type.empty()) {
    if (type == want) return true;
    if (type == "object") return false;
    type = parent_of(d, type);
  }
  return false;
}

std::optional<std::string> type_of(const Domain& d, const Problem& p, const std::string& name) {
  for (const auto& o : p.objects) {
    if (o.name.str() == name) return o.type.str();
  }
  for (const auto& c : d.constants) {
    if (c.name.str() == name) return c.type.str();
  }
  return std::nullopt;
}

std::vector<std::string> candidates(const Domain& d, const Problem& p, const std::string& type) {
  std::set<std::string> out;
  for (const auto& o : p.objects) {
    if (type_ok(d, o.type.str(), type)) out.insert(o.name.str());
  }
  for (const auto& c : d.constants) {
    if (type_ok(d, c.type.str(), type)) out.insert(c.name.str());
  }
  return {out.begin(), out.end()};
}

}  // namespace

std::string Step::str() const {
  std::string out = "(" + action;
  for (const auto& a : args) out += " " + a;
  return out + ")";
}

AtomSet init_of(const Problem& problem) {
  AtomSet s;
  for (const auto& a : problem.init) s.insert(render(a, {}));
  return s;
}

AtomSet to_set(const std::set<Atom>& atoms) {
  AtomSet s;
  for (const auto& a : atoms) s.insert(render(a, {}));
  return s;
}

std::optional<AtomSet> step(const Domain& d, const Problem& p, const AtomSet& state, const Step& s) {
  const pddlforge::pddl::ActionSchema* schema = nullptr;
  for (const auto& a : d.actions) {
    if (a.name.str() == s.action) schema = &a;
  }
  if (schema == nullptr || schema->parameters.size() != s.args.size()) return std::nullopt;
  Env env;
  for (size_t i = 0; i < s.args.size(); ++i) {
    auto t = type_of(d, p, s.args[i]);
    if (!t || !type_ok(d, *t, schema->parameters[i].type.str())) return std::nullopt;
    env[schema->parameters[i].name.str()] = s.args[i];
  }
  if (!eval(schema->precondition, env, state)) return std::nullopt;

  AtomSet removed, added;
  for (const auto& a : schema->effect.deletes) removed.insert(render(a, env));
  for (const auto& a : schema->effect.adds) added.insert(render(a, env));
  for (const auto& ce : schema->effect.conditional) {
    if (!eval(ce.condition, env, state)) continue;
    for (const auto& a : ce.deletes) removed.insert(render(a, env));
    for (const auto& a : ce.adds) added.insert(render(a, env));
  }
  AtomSet next;
  for (const auto& a : state) {
    if (!removed.count(a)) next.insert(a);
  }
  next.insert(added.begin(), added.end());
  return next;
}

bool goal_holds(const Problem& p, const AtomSet& state) { return eval(p.goal, {}, state); }

Verdict simulate(const Domain& d, const Problem& p, const std::vector<Step>& plan) {
  Verdict v;
  v.final_state = init_of(p);
  for (const auto& s : plan) {
    auto next = step(d, p, v.final_state, s);
    if (!next) return v;
    v.final_state = std::move(*next);
    ++v.executed;
  }
  v.valid = goal_holds(p, v.final_state);
  return v;
}

std::vector<Step> enumerate_steps(const Domain& d, const Problem& p) {
  std::vector<Step> out;
  for (const auto& schema : d.actions) {
    std::vector<std::vector<std::string>> lists;
    for (const auto& param : schema.parameters) lists.push_back(candidates(d, p, param.type.str()));
    std::vector<std::string> current;
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == lists.size()) {
        out.push_back({schema.name.str(), current});
        return;
      }
      for (const auto& o : lists[i]) {
        current.push_back(o);
        rec(i + 1);
        current.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

size_t count_typed_tuples(const Domain& d, const Problem& p) {
  size_t total = 0;
  for (const auto& schema : d.actions) {
    size_t n = 1;
    for (const auto& param : schema.parameters) n *= candidates(d, p, param.type.str()).size();
    total += n;
  }
  return total;
}

std::vector<std::vector<Step>> enumerate_plans(const Domain& d, const Problem& p, size_t depth) {
  std::vector<Step> all = enumerate_steps(d, p);
  std::vector<std::vector<Step>> out;
  std::vector<std::pair<std::vector<Step>, AtomSet>> frontier{{{}, init_of(p)}};
  out.push_back({});
  for (size_t level = 0; level < depth; ++level) {
    std::vector<std::pair<std::vector<Step>, AtomSet>> next;
    for (const auto& [plan, state] : frontier) {
      for (const auto& s : all) {
        auto succ = step(d, p, state, s);
        if (!succ) continue;
        auto extended = plan;
        extended.push_back(s);
        out.push_back(extended);
        next.emplace_back(std::move(extended), std::move(*succ));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

ArmPose pose_of(const AtomSet& state) {
  ArmPose pose;
  for (const auto& a : state) {
    if (a.rfind("(angle ", 0) != 0) continue;
    // (angle jX aDEG)
    auto sp = a.find(' ', 7);
    std::string joint = a.substr(7, sp - 7);
    int deg = std::stoi(a.substr(sp + 2, a.size() - sp - 3));
    pose.joint_degrees[joint] = deg;
  }
  return pose;
}

ArmPose rotate_pose(const ArmPose& pose, const Step& s) {
  ArmPose out = pose;
  int delta = s.action.find("-ccw") != std::string::npos ? -15 : 15;
  auto turn = [&](const std::string& joint) {
    auto it = out.joint_degrees.find(joint);
    if (it != out.joint_degrees.end()) it->second = ((it->second + delta) % 360 + 360) % 360;
  };
  // rotate-cw ?j ?jd ...: both turn; rotate-cw-tip ?j ...: only ?j
  turn(s.args.at(0));
  if (s.action.find("-tip") == std::string::npos) turn(s.args.at(1));
  return out;
}

}  // namespace oracle
