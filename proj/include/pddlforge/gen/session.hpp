#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pddlforge/dpgc/config.hpp"
#include "pddlforge/gen/generator.hpp"
#include "pddlforge/pddl/ast.hpp"

namespace pddlforge::gen {

namespace fs = std::filesystem;

/// Files of a generation session directory.
struct SessionPaths {
  fs::path root;

  fs::path config() const { return root / "config.dpgc.json"; }
  fs::path domain() const { return root / "domain.pddl"; }
  fs::path meta() const { return root / "session.json"; }
  fs::path problems() const { return root / "problems"; }
  fs::path journal() const { return root / "journal.fp"; }
  fs::path log() const { return root / "generation.log"; }
};

/// `<domain>_<index>`, index 1-based and zero-padded to six digits.
std::string problem_name(const pddl::Symbol& domain, size_t index);

struct GenerationSession {
  uint64_t seed = 0;
  size_t target_count = 0;
  std::string domain_name;
  std::string config_hash;
  std::string domain_hash;
  /// Fingerprints in emission order.
  std::vector<std::string> journal;

  size_t emitted_count() const { return journal.size(); }

  /// Reads session.json and journal.fp.
  static GenerationSession load(const SessionPaths& paths);
};

/// The session on disk was created from a different seed, config or domain.
class SessionMismatch : public Error {
 public:
  using Error::Error;
};

/// Too many consecutive draws were duplicates of already emitted problems.
class NonConvergence : public GenerationError {
 public:
  using GenerationError::GenerationError;
};

struct BatchOptions {
  uint64_t seed = 0;
  size_t target = 0;
  /// Stop after emitting this many new problems, as if interrupted.
  std::optional<size_t> stop_after;
  size_t max_consecutive_duplicates = 1000;
};

struct BatchResult {
  size_t emitted_total = 0;
  size_t emitted_now = 0;
  size_t duplicates = 0;
  size_t trivial = 0;
  bool complete = false;
};

/// Creates or resumes the session at `paths.root` and emits problems until
/// `target` unique problems exist. The journal is flushed after every emission;
/// a resumed run reproduces exactly the sequence an uninterrupted run would.
/// The target of an existing session may be raised.
BatchResult generate_batch(const SessionPaths& paths, const pddl::Domain& domain, const dpgc::Config& config,
                           const BatchOptions& options);

}  // namespace pddlforge::gen
