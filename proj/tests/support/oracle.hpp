#pragma once

// Brute-force reference semantics for tests. Deliberately shares nothing with
// the library beyond the parsed AST: states are sets of rendered atom strings
// and substitution/type checks are re-implemented here.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pddlforge/pddl/ast.hpp"

namespace oracle {

using AtomSet = std::set<std::string>;

struct Step {
  std::string action;
  std::vector<std::string> args;

  std::string str() const;
};

AtomSet init_of(const pddlforge::pddl::Problem& problem);
AtomSet to_set(const std::set<pddlforge::pddl::Atom>& atoms);

/// Successor of `state`, or nullopt when the step does not exist, has bad
/// arguments, or its precondition fails.
std::optional<AtomSet> step(const pddlforge::pddl::Domain& d, const pddlforge::pddl::Problem& p,
                            const AtomSet& state, const Step& s);

bool goal_holds(const pddlforge::pddl::Problem& p, const AtomSet& state);

struct Verdict {
  bool valid = false;
  size_t executed = 0;
  AtomSet final_state;
};

Verdict simulate(const pddlforge::pddl::Domain& d, const pddlforge::pddl::Problem& p,
                 const std::vector<Step>& plan);

/// All typed argument tuples, schema order then lexicographic.
std::vector<Step> enumerate_steps(const pddlforge::pddl::Domain& d, const pddlforge::pddl::Problem& p);

/// Product of per-parameter candidate counts summed over schemas.
size_t count_typed_tuples(const pddlforge::pddl::Domain& d, const pddlforge::pddl::Problem& p);

/// Every applicable step sequence of length <= depth (including the empty one).
std::vector<std::vector<Step>> enumerate_plans(const pddlforge::pddl::Domain& d,
                                               const pddlforge::pddl::Problem& p, size_t depth);

// --- artic3 kinematics: absolute joint angles in degrees -------------------

struct ArmPose {
  std::map<std::string, int> joint_degrees;  // j1, j2
};

ArmPose pose_of(const AtomSet& state);

/// Expected pose after a rotate-* step, from angle arithmetic alone.
ArmPose rotate_pose(const ArmPose& pose, const Step& s);

}  // namespace oracle
