#include <CLI11.hpp>

#include <ostream>

#include "pddlforge/cli/commands.hpp"
#include "pddlforge/gen/session.hpp"
#include "pddlforge/pddl/parser.hpp"
#include "pddlforge/planner/reference.hpp"
#include "pddlforge/util/io.hpp"

namespace pddlforge::cli {

namespace {

struct RefPlanArgs {
  std::string domain, problem, output;
  size_t max_depth = 64;
  size_t max_expansions = 1'000'000;
};

int cmd_ref_plan(const RefPlanArgs& a, std::ostream& out) {
  auto domain = pddl::parse_domain(util::read_file(a.domain));
  auto problem = pddl::parse_problem(util::read_file(a.problem), domain);
  auto r = planner::reference_plan(domain, problem, {a.max_depth, a.max_expansions, std::nullopt});
  if (r.status != planner::PlanStatus::solved) {
    out << "no solution: " << r.diagnostic << "\n";
    return kFailure;
  }
  if (a.output.empty()) {
    out << r.plan->str();
  } else {
    util::write_file(a.output, r.plan->str());
  }
  return kOk;
}

/// `name=800/100/100`
std::pair<std::string, dataset::SplitCounts> parse_quota(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--quota", "expected DOMAIN=TRAIN/VALID/TEST");
  return {text.substr(0, eq), dataset::SplitCounts::parse(text.substr(eq + 1))};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pddlforge: PDDL problem generation, planning and dataset tooling"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-problems", "Generate unique problems from a DPGC config");
  gen_cmd->add_option("--domain", gen.domain, "Domain file")->required();
  gen_cmd->add_option("--dpgc", gen.dpgc, "DPGC config")->required();
  gen_cmd->add_option("--count", gen.count, "Number of problems")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Session directory")->required();

  PlanArgs plan;
  double plan_timeout = 0;
  auto* plan_cmd = app.add_subcommand("plan", "Plan every unattempted problem of a session");
  plan_cmd->add_option("--session", plan.session, "Session directory")->required();
  plan_cmd->add_option("--adapter", plan.adapter, "Planner adapter name")->capture_default_str();
  auto* plan_registry = plan_cmd->add_option("--registry", "Adapter registry (default $PDDLFORGE_ADAPTERS)");
  auto* plan_timeout_opt = plan_cmd->add_option("--timeout", plan_timeout, "Per-problem timeout in seconds");
  plan_cmd->add_option("--workers", plan.workers, "Concurrent planner runs")->check(CLI::PositiveNumber);

  AssembleArgs assemble;
  std::vector<std::string> sessions, quotas;
  std::string split, assemble_out;
  auto* asm_cmd = app.add_subcommand("assemble", "Build train/valid/test Alpaca files from solved sessions");
  asm_cmd->add_option("--session", sessions, "Session directory (repeatable)")->required();
  auto* split_opt = asm_cmd->add_option("--split", split, "TRAIN/VALID/TEST, divided evenly between domains");
  auto* quota_opt = asm_cmd->add_option("--quota", quotas, "DOMAIN=TRAIN/VALID/TEST (repeatable)");
  split_opt->excludes(quota_opt);
  asm_cmd->add_option("--seed", assemble.seed, "Random seed")->required();
  asm_cmd->add_option("--out", assemble_out, "Dataset directory (default <first session>/dataset)");
  asm_cmd->add_option("--instruction-prefix", assemble.instruction_prefix, "Text placed before the domain");
  asm_cmd->add_option("--workers", assemble.workers, "Re-validation threads")->check(CLI::PositiveNumber);

  std::string v_domain, v_problem, v_plan;
  auto* val_cmd = app.add_subcommand("validate", "Validate a plan; exit 0 iff valid");
  val_cmd->add_option("--domain", v_domain, "Domain file")->required();
  val_cmd->add_option("--problem", v_problem, "Problem file")->required();
  val_cmd->add_option("--plan", v_plan, "Plan file")->required();

  std::string audit_dir;
  auto* audit_cmd = app.add_subcommand("audit", "Check a dataset directory for split leakage");
  audit_cmd->add_option("--dataset", audit_dir, "Dataset directory")->required();

  EvalArgs ev;
  std::string replay;
  auto* eval_cmd = app.add_subcommand("eval", "Query a completion endpoint with the test split and score it");
  eval_cmd->add_option("--dataset", ev.dataset, "Dataset directory or file")->required();
  eval_cmd->add_option("--endpoint", ev.endpoint, "Endpoint config file")->required();
  eval_cmd->add_option("--out", ev.out, "Report directory")->required();
  eval_cmd->add_option("--replay", replay, "Score an existing inferences.jsonl");

  std::string pipeline_config, pipeline_out;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Generate, plan, regenerate the shortfall and assemble");
  pipe_cmd->add_option("--config", pipeline_config, "Pipeline config file")->required();
  pipe_cmd->add_option("--out", pipeline_out, "Session root")->required();

  RefPlanArgs ref;
  auto* ref_cmd = app.add_subcommand("ref-plan", "Solve one problem with the internal breadth-first planner");
  ref_cmd->add_option("--domain", ref.domain, "Domain file")->required();
  ref_cmd->add_option("--problem", ref.problem, "Problem file")->required();
  ref_cmd->add_option("--output", ref.output, "Write the plan here instead of stdout");
  ref_cmd->add_option("--max-depth", ref.max_depth, "Search depth bound");
  ref_cmd->add_option("--max-expansions", ref.max_expansions, "Expansion budget");

  try {
    app.parse(argc, argv);
    for (const auto& q : quotas) assemble.quotas.push_back(parse_quota(q));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_problems(gen, out, err);
    if (*plan_cmd) {
      if (*plan_registry) plan.registry = plan_registry->as<std::string>();
      if (*plan_timeout_opt) plan.timeout_s = plan_timeout;
      return cmd_plan(plan, out, err);
    }
    if (*asm_cmd) {
      for (const auto& s : sessions) assemble.sessions.emplace_back(s);
      if (!split.empty()) assemble.split = dataset::SplitCounts::parse(split);
      if (!assemble_out.empty()) assemble.out = assemble_out;
      return cmd_assemble(assemble, out, err);
    }
    if (*val_cmd) return cmd_validate(v_domain, v_problem, v_plan, out, err);
    if (*audit_cmd) return cmd_audit(audit_dir, out, err);
    if (*eval_cmd) {
      if (!replay.empty()) ev.replay = replay;
      return cmd_eval(ev, out, err);
    }
    if (*pipe_cmd) return cmd_pipeline(PipelineConfig::load(pipeline_config), pipeline_out, out, err);
    if (*ref_cmd) return cmd_ref_plan(ref, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace pddlforge::cli
