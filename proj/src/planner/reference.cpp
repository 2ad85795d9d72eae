#include "pddlforge/planner/reference.hpp"

#include <cstring>
#include <map>
#include <unordered_map>

#include "pddlforge/pddl/ground.hpp"

namespace pddlforge::planner {

std::string_view to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::solved: return "solved";
    case PlanStatus::timeout: return "timeout";
    case PlanStatus::no_solution: return "no_solution";
    case PlanStatus::crashed: return "crashed";
  }
  return "?";
}

namespace {

using Bits = std::vector<uint64_t>;

struct Branch {
  std::vector<uint32_t> pos, neg, add, del;
};

struct CompiledAction {
  size_t ground_index = 0;
  Branch body;
  std::vector<Branch> conditional;
};

class Compiler {
 public:
  uint32_t index(const pddl::Atom& a) {
    auto [it, fresh] = ids_.emplace(a, static_cast<uint32_t>(ids_.size()));
    return it->second;
  }
  size_t size() const { return ids_.size(); }

  // False when an equality literal can never hold, which rules the branch out.
  bool condition(const pddl::Condition& c, Branch& b) {
    for (const auto& l : c.literals) {
      if (l.is_equality()) {
        if ((l.atom.args[0] == l.atom.args[1]) == l.negated) return false;
        continue;
      }
      (l.negated ? b.neg : b.pos).push_back(index(l.atom));
    }
    return true;
  }

  void effects(const std::vector<pddl::Atom>& adds, const std::vector<pddl::Atom>& dels, Branch& b) {
    for (const auto& a : adds) b.add.push_back(index(a));
    for (const auto& a : dels) b.del.push_back(index(a));
  }

 private:
  std::map<pddl::Atom, uint32_t> ids_;
};

bool test(const Bits& s, uint32_t i) { return (s[i >> 6] >> (i & 63)) & 1; }
void set(Bits& s, uint32_t i) { s[i >> 6] |= uint64_t{1} << (i & 63); }
void clear(Bits& s, uint32_t i) { s[i >> 6] &= ~(uint64_t{1} << (i & 63)); }

bool holds(const Bits& s, const Branch& b) {
  for (auto i : b.pos) {
    if (!test(s, i)) return false;
  }
  for (auto i : b.neg) {
    if (test(s, i)) return false;
  }
  return true;
}

struct BitsHash {
  size_t operator()(const Bits& b) const noexcept {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint64_t w : b) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }
};

}  // namespace

PlanResult reference_plan(const pddl::Domain& domain, const pddl::Problem& problem, const SearchLimits& limits) {
  auto started = std::chrono::steady_clock::now();
  auto finish = [&](PlanResult r) {
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
  };

  auto ground = pddl::ground_actions(domain, problem);
  Compiler comp;
  std::vector<CompiledAction> actions;
  for (size_t i = 0; i < ground.size(); ++i) {
    CompiledAction a;
    a.ground_index = i;
    if (!comp.condition(ground[i].precondition, a.body)) continue;
    comp.effects(ground[i].effect.adds, ground[i].effect.deletes, a.body);
    for (const auto& ce : ground[i].effect.conditional) {
      Branch b;
      if (!comp.condition(ce.condition, b)) continue;
      comp.effects(ce.adds, ce.deletes, b);
      a.conditional.push_back(std::move(b));
    }
    actions.push_back(std::move(a));
  }
  Branch goal;
  bool goal_possible = comp.condition(problem.goal, goal);
  for (const auto& atom : problem.init) comp.index(atom);

  const size_t words = (comp.size() + 63) / 64;
  Bits init(words, 0);
  for (const auto& atom : problem.init) set(init, comp.index(atom));

  auto extract = [&](const std::vector<std::pair<int64_t, uint32_t>>& parent, int64_t node) {
    validate::Plan plan;
    std::vector<size_t> rev;
    for (; parent[node].first >= 0; node = parent[node].first) rev.push_back(parent[node].second);
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      const auto& g = ground[actions[*it].ground_index];
      plan.steps.push_back({g.schema, g.args});
    }
    PlanResult r;
    r.status = PlanStatus::solved;
    r.plan = std::move(plan);
    r.raw_output = r.plan->str();
    return r;
  };

  if (!goal_possible) {
    PlanResult r;
    r.status = PlanStatus::no_solution;
    r.diagnostic = "goal contains an unsatisfiable equality";
    return finish(std::move(r));
  }

  // node storage: states[i], parent[i] = (parent node, action), depth[i]
  std::vector<Bits> states{init};
  std::vector<std::pair<int64_t, uint32_t>> parent{{-1, 0}};
  std::vector<uint32_t> depth{0};
  std::unordered_map<Bits, uint32_t, BitsHash> seen{{init, 0}};
  if (holds(init, goal)) return finish(extract(parent, 0));

  size_t expansions = 0;
  bool depth_cut = false;
  Bits next(words);
  for (size_t head = 0; head < states.size(); ++head) {
    if (depth[head] >= limits.max_depth) {
      depth_cut = true;
      continue;
    }
    if (++expansions > limits.max_expansions) {
      PlanResult r;
      r.status = PlanStatus::no_solution;
      r.budget_exhausted = true;
      r.diagnostic = "expansion budget of " + std::to_string(limits.max_expansions) + " exhausted";
      return finish(std::move(r));
    }
    if (limits.deadline && (expansions & 255) == 0 && std::chrono::steady_clock::now() > *limits.deadline) {
      PlanResult r;
      r.status = PlanStatus::timeout;
      r.diagnostic = "deadline passed during search";
      return finish(std::move(r));
    }
    for (uint32_t ai = 0; ai < actions.size(); ++ai) {
      const Bits& s = states[head];
      const auto& a = actions[ai];
      if (!holds(s, a.body)) continue;
      next = s;
      // conditions read the pre-state; deletes first, then adds
      std::vector<const Branch*> active{&a.body};
      for (const auto& b : a.conditional) {
        if (holds(s, b)) active.push_back(&b);
      }
      for (const Branch* b : active) {
        for (auto i : b->del) clear(next, i);
      }
      for (const Branch* b : active) {
        for (auto i : b->add) set(next, i);
      }
      if (seen.contains(next)) continue;
      uint32_t id = static_cast<uint32_t>(states.size());
      seen.emplace(next, id);
      states.push_back(next);
      parent.push_back({static_cast<int64_t>(head), ai});
      depth.push_back(depth[head] + 1);
      if (holds(next, goal)) return finish(extract(parent, id));
    }
  }

  PlanResult r;
  r.status = PlanStatus::no_solution;
  r.diagnostic = depth_cut ? "no plan within depth " + std::to_string(limits.max_depth) : "goal unreachable";
  return finish(std::move(r));
}

}  // namespace pddlforge::planner
