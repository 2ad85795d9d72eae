#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pddlforge/dataset/dataset.hpp"
#include "pddlforge/error.hpp"

namespace pddlforge::cli {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailure = 2;

/// Fixed subpaths of a session directory. Stage markers live in logs/.
struct SessionLayout {
  fs::path root;

  fs::path problems() const { return root / "problems"; }
  fs::path plans() const { return root / "plans"; }
  fs::path dataset() const { return root / "dataset"; }
  fs::path logs() const { return root / "logs"; }
  fs::path marker(std::string_view stage) const { return logs() / (std::string(stage) + ".done"); }
};

/// The marker text, or nullopt when the stage has not completed.
std::optional<std::string> read_marker(const SessionLayout& session, std::string_view stage);
void write_marker(const SessionLayout& session, std::string_view stage, std::string_view text);

struct GenArgs {
  fs::path domain;
  fs::path dpgc;
  size_t count = 0;
  uint64_t seed = 0;
  fs::path out;
};

struct PlanArgs {
  fs::path session;
  std::string adapter = "internal";
  std::optional<fs::path> registry;
  std::optional<double> timeout_s;
  size_t workers = 1;
};

struct AssembleArgs {
  std::vector<fs::path> sessions;
  /// Either `split` (divided evenly between domains) or per-domain quotas.
  std::optional<dataset::SplitCounts> split;
  std::vector<std::pair<std::string, dataset::SplitCounts>> quotas;
  uint64_t seed = 0;
  /// Defaults to dataset/ under the first session.
  std::optional<fs::path> out;
  std::string instruction_prefix;
  size_t workers = 1;
};

struct EvalArgs {
  /// A dataset directory (its test.json is used) or a dataset file.
  fs::path dataset;
  fs::path endpoint;
  fs::path out;
  /// Score a previous inferences.jsonl instead of querying the endpoint.
  std::optional<fs::path> replay;
};

struct PipelineDomain {
  fs::path domain;
  fs::path dpgc;
  dataset::SplitCounts quota;
  /// Problems generated before the first planning round; defaults to the
  /// quota total.
  std::optional<size_t> generate;
};

/// One declarative description of a full run. Relative paths are resolved
/// against the directory of the config file.
struct PipelineConfig {
  uint64_t seed = 0;
  std::string adapter = "internal";
  std::optional<fs::path> registry;
  std::optional<double> timeout_s;
  size_t workers = 1;
  std::string instruction_prefix;
  size_t max_rounds = 10;
  std::vector<PipelineDomain> domains;

  static PipelineConfig parse(std::string_view json_text, const fs::path& base_dir);
  static PipelineConfig load(const fs::path& path);
};

/// Each returns an exit code and reports progress on `out`, problems on `err`.
int cmd_gen_problems(const GenArgs& args, std::ostream& out, std::ostream& err);
int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err);
int cmd_assemble(const AssembleArgs& args, std::ostream& out, std::ostream& err);
int cmd_validate(const fs::path& domain, const fs::path& problem, const fs::path& plan, std::ostream& out,
                 std::ostream& err);
int cmd_audit(const fs::path& dataset_dir, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
/// Per-domain sessions under `root`/sessions/<domain>, dataset under
/// `root`/dataset: gen, plan, regenerate the shortfall (at most max_rounds
/// times), assemble.
int cmd_pipeline(const PipelineConfig& config, const fs::path& root, std::ostream& out, std::ostream& err);

/// Command-line entry point over the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pddlforge::cli
