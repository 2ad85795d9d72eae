#pragma once

#include <map>
#include <string>
#include <vector>

#include "pddlforge/dpgc/config.hpp"
#include "pddlforge/error.hpp"
#include "pddlforge/gen/rng.hpp"
#include "pddlforge/pddl/ast.hpp"

namespace pddlforge::gen {

using pddl::Symbol;

/// Sampling could not satisfy the config: a mutex or sequential pool ran out,
/// a tag offset left the pool, or two pools produced the same object name.
class GenerationError : public Error {
 public:
  using Error::Error;
};

struct ObjectTable {
  /// Pool id to that pool's objects in canonical order.
  std::map<Symbol, std::vector<Symbol>> pools;
  /// Every object with its type, in pool order.
  std::vector<pddl::TypedName> objects;

  const std::vector<Symbol>& of(const Symbol& pool) const;
};

ObjectTable instantiate_objects(const dpgc::Config& config);

/// Samples one section. Mutex and sequential bookkeeping starts fresh on every
/// call. Atoms are returned in emission order, duplicates included.
std::vector<pddl::Atom> sample_section(const dpgc::Config& config, dpgc::Section section,
                                       const ObjectTable& objects, Rng& rng);

/// init = constant_init + sampled variable_init; goal = sampled variable_goal.
/// Pool objects that are domain constants are not redeclared in :objects.
pddl::Problem generate_problem(const pddl::Domain& domain, const dpgc::Config& config, Rng& rng,
                               const Symbol& name);

/// The goal already holds in the initial state.
bool is_trivial(const pddl::Problem& problem);

}  // namespace pddlforge::gen
