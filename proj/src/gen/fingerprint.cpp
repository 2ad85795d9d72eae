#include "pddlforge/gen/fingerprint.hpp"

#include "pddlforge/pddl/serialize.hpp"
#include "pddlforge/util/hash.hpp"

namespace pddlforge::gen {

std::string fingerprint(const pddl::Problem& problem) {
  pddl::Problem anonymous = problem;
  anonymous.name = pddl::Symbol("problem");
  pddl::canonicalize_init(anonymous.init);
  return util::hash_hex(pddl::serialize_problem(anonymous));
}

}  // namespace pddlforge::gen
