#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pddlforge/error.hpp"
#include "pddlforge/pddl/ast.hpp"

namespace pddlforge::dpgc {

using pddl::Symbol;

enum class UsageMode { random, mutex, sequential };

std::string_view to_string(UsageMode mode);

/// Object names are `prefix` followed by start, start+step, ...
struct Naming {
  std::string prefix;
  int64_t start = 1;
  int64_t step = 1;

  friend bool operator==(const Naming&, const Naming&) = default;
};

struct ObjectPool {
  Symbol id;
  Symbol type;
  size_t quantity = 1;
  Naming naming;
  UsageMode usage = UsageMode::random;

  /// The pool's objects in canonical order.
  std::vector<Symbol> object_names() const;

  friend bool operator==(const ObjectPool&, const ObjectPool&) = default;
};

/// `$label` or `$label+offset` suffix of a selector.
struct Tag {
  std::string label;
  size_t offset = 0;

  friend bool operator==(const Tag&, const Tag&) = default;
};

struct PoolSelector {
  Symbol pool;
  std::optional<Tag> tag;

  /// Document syntax: `pool`, `pool$label`, `pool$label+k`.
  static PoolSelector parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const PoolSelector&, const PoolSelector&) = default;
};

struct PredicateSpec {
  Symbol predicate;
  double probability = 1.0;
  size_t count = 1;
  std::vector<PoolSelector> args;

  friend bool operator==(const PredicateSpec&, const PredicateSpec&) = default;
};

struct PredicatePool {
  Symbol id;
  std::vector<PredicateSpec> predicates;

  friend bool operator==(const PredicatePool&, const PredicatePool&) = default;
};

enum class Section { variable_init, variable_goal };

std::string_view to_string(Section section);

/// Exactly one member pool of the section is used per problem, chosen with
/// probability proportional to its weight.
struct MutexGroup {
  Section section = Section::variable_init;
  std::vector<Symbol> members;
  std::vector<double> weights;

  friend bool operator==(const MutexGroup&, const MutexGroup&) = default;
};

struct Config {
  Symbol domain;
  std::vector<ObjectPool> object_pools;
  std::vector<pddl::Atom> constant_init;
  std::vector<PredicatePool> variable_init;
  std::vector<PredicatePool> variable_goal;
  std::vector<MutexGroup> mutex_groups;

  const ObjectPool* find_pool(const Symbol& id) const;
  const std::vector<PredicatePool>& section(Section s) const;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Schema violation, annotated with the document path of the offending value
/// (e.g. `variable_init[0].predicates[1].args[0]`).
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses a JSON document, applying defaults and rejecting unknown keys.
Config parse_config(std::string_view text);

/// Fully materialized JSON form (defaults written out).
std::string serialize_config(const Config& config);

enum class Severity { error, warning };

struct Diagnostic {
  std::string path;
  Severity severity = Severity::error;
  std::string message;

  /// `path: severity: message`
  std::string str() const;
};

/// Cross-checks a config against a domain. Returns an empty list iff every
/// referenced predicate exists with matching arity and all pool types fit.
std::vector<Diagnostic> validate_against_domain(const Config& config, const pddl::Domain& domain);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace pddlforge::dpgc
