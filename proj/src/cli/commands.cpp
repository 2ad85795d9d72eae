#include "pddlforge/cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pddlforge/dpgc/config.hpp"
#include "pddlforge/eval/eval.hpp"
#include "pddlforge/gen/session.hpp"
#include "pddlforge/pddl/parser.hpp"
#include "pddlforge/planner/driver.hpp"
#include "pddlforge/util/hash.hpp"
#include "pddlforge/util/io.hpp"
#include "pddlforge/validate/validator.hpp"

namespace pddlforge::cli {

using nlohmann::json;

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

/// Reads and checks a DPGC file against the domain, printing diagnostics.
/// Returns nullopt when there are errors.
std::optional<dpgc::Config> load_config(const fs::path& path, const pddl::Domain& domain, std::ostream& err) {
  dpgc::Config config;
  try {
    config = dpgc::parse_config(util::read_file(path));
  } catch (const dpgc::ConfigError& e) {
    err << path.string() << ": error: " << e.what() << "\n";
    return std::nullopt;
  }
  auto diagnostics = dpgc::validate_against_domain(config, domain);
  for (const auto& d : diagnostics) err << path.string() << ": " << d.str() << "\n";
  if (dpgc::has_errors(diagnostics)) return std::nullopt;
  return config;
}

planner::PlannerAdapter resolve_adapter(const std::string& name, const std::optional<fs::path>& registry_path) {
  if (name == "internal" && !registry_path) return planner::internal_adapter();
  auto path = registry_path ? registry_path : planner::AdapterRegistry::default_path();
  planner::AdapterRegistry registry = path ? planner::AdapterRegistry::load(*path) : planner::AdapterRegistry{};
  return registry.get(name);
}

gen::BatchOptions batch(uint64_t seed, size_t target) {
  gen::BatchOptions options;
  options.seed = seed;
  options.target = target;
  return options;
}

size_t count_problems(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ".pddl";
  return n;
}

size_t count_solved(const planner::PlanningPaths& paths) {
  if (!fs::exists(paths.log())) return 0;
  size_t n = 0;
  for (const auto& e : planner::read_planning_log(paths.log())) n += e.status == planner::PlanStatus::solved;
  return n;
}

void print_gen(std::ostream& out, const std::string& tag, const gen::BatchResult& r, const gen::SessionPaths& paths) {
  auto session = gen::GenerationSession::load(paths);
  std::unordered_set<std::string> unique(session.journal.begin(), session.journal.end());
  out << tag << "generated " << r.emitted_now << " new problems (total " << r.emitted_total << ", redrawn duplicates "
      << r.duplicates << ", trivial " << r.trivial << "); " << unique.size() << " unique fingerprints of "
      << session.journal.size() << "\n";
}

void print_plan(std::ostream& out, const std::string& tag, const planner::PlanBatchReport& r) {
  out << tag << "planned " << r.attempted.size() << " problems: solved " << r.solved << ", timeout " << r.timeouts
      << ", no_solution " << r.no_solution << ", crashed " << r.crashed << "; unsolved in session " << r.shortfall;
  if (r.wall_time.count > 0)
    out << "; wall avg " << fixed(r.wall_time.avg, 3) << "s max " << fixed(r.wall_time.max, 3) << "s";
  out << "\n";
}

std::string spec_text(const dataset::SplitSpec& spec) {
  std::string text = "seed=" + std::to_string(spec.seed);
  for (const auto& [d, q] : spec.quotas)
    text += " " + d + "=" + std::to_string(q.train) + "/" + std::to_string(q.valid) + "/" + std::to_string(q.test);
  return text;
}

/// Assembles, writes and audits. Returns an exit code.
int assemble_and_write(std::vector<dataset::DatasetRecord> records, const dataset::SplitSpec& spec,
                       const fs::path& out_dir, const dataset::WriteOptions& options, std::ostream& out,
                       std::ostream& err) {
  dataset::AssembledDataset data;
  try {
    data = dataset::assemble(std::move(records), spec);
  } catch (const dataset::InsufficientRecords& e) {
    err << "error: insufficient records\n";
    for (const auto& [domain, missing] : e.shortfall()) err << "  " << domain << ": short by " << missing << "\n";
    return kFailure;
  }
  dataset::write_dataset(out_dir, data, options);
  auto audit = dataset::audit_leakage({out_dir / "train.json", out_dir / "valid.json", out_dir / "test.json"});
  out << "dataset " << out_dir.string() << ": train " << data.train.size() << ", valid " << data.valid.size()
      << ", test " << data.test.size() << ", spillover " << data.spillover.size() << "; leakage audit "
      << (audit.pass() ? "pass" : "FAIL") << "\n";
  return audit.pass() ? kOk : kFailure;
}

}  // namespace

std::optional<std::string> read_marker(const SessionLayout& session, std::string_view stage) {
  auto path = session.marker(stage);
  if (!fs::exists(path)) return std::nullopt;
  return util::read_file(path);
}

void write_marker(const SessionLayout& session, std::string_view stage, std::string_view text) {
  fs::create_directories(session.logs());
  util::write_file(session.marker(stage), text);
}

PipelineConfig PipelineConfig::parse(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("pipeline config: ") + e.what());
  }
  auto fail = [](const std::string& msg) { throw Error("pipeline config: " + msg); };
  if (!j.is_object()) fail("expected an object");
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
  PipelineConfig c;
  bool has_seed = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      if (!v.is_number_unsigned()) fail("'seed' must be a non-negative integer");
      c.seed = v.get<uint64_t>();
      has_seed = true;
    } else if (key == "adapter") {
      if (!v.is_string()) fail("'adapter' must be a string");
      c.adapter = v.get<std::string>();
    } else if (key == "registry") {
      if (!v.is_string()) fail("'registry' must be a string");
      c.registry = resolve(v.get<std::string>());
    } else if (key == "timeout_s") {
      if (!v.is_number() || v.get<double>() <= 0) fail("'timeout_s' must be a positive number");
      c.timeout_s = v.get<double>();
    } else if (key == "workers") {
      if (!v.is_number_unsigned() || v.get<size_t>() == 0) fail("'workers' must be a positive integer");
      c.workers = v.get<size_t>();
    } else if (key == "instruction_prefix") {
      if (!v.is_string()) fail("'instruction_prefix' must be a string");
      c.instruction_prefix = v.get<std::string>();
    } else if (key == "max_rounds") {
      if (!v.is_number_unsigned()) fail("'max_rounds' must be a non-negative integer");
      c.max_rounds = v.get<size_t>();
    } else if (key == "domains") {
      if (!v.is_array() || v.empty()) fail("'domains' must be a non-empty array");
      for (size_t i = 0; i < v.size(); ++i) {
        const auto& d = v[i];
        std::string at = "domains[" + std::to_string(i) + "]";
        if (!d.is_object()) fail(at + " must be an object");
        PipelineDomain pd;
        bool has_domain = false, has_dpgc = false, has_quota = false;
        for (const auto& [k, dv] : d.items()) {
          if (k == "domain" && dv.is_string()) {
            pd.domain = resolve(dv.get<std::string>());
            has_domain = true;
          } else if (k == "dpgc" && dv.is_string()) {
            pd.dpgc = resolve(dv.get<std::string>());
            has_dpgc = true;
          } else if (k == "quota" && dv.is_string()) {
            pd.quota = dataset::SplitCounts::parse(dv.get<std::string>());
            has_quota = true;
          } else if (k == "generate" && dv.is_number_unsigned()) {
            pd.generate = dv.get<size_t>();
          } else {
            fail(at + "." + k + ": unknown key or wrong type");
          }
        }
        if (!has_domain || !has_dpgc || !has_quota) fail(at + " needs 'domain', 'dpgc' and 'quota'");
        c.domains.push_back(std::move(pd));
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!has_seed) fail("'seed' is required");
  if (c.domains.empty()) fail("'domains' is required");
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  return parse(util::read_file(path), fs::absolute(path).parent_path());
}

int cmd_gen_problems(const GenArgs& args, std::ostream& out, std::ostream& err) {
  SessionLayout layout{args.out};
  std::string marker = "seed=" + std::to_string(args.seed) + " count=" + std::to_string(args.count) + "\n";
  if (read_marker(layout, "gen") == marker) {
    out << "gen-problems: already complete (" << args.count << " problems)\n";
    return kOk;
  }
  auto domain = pddl::parse_domain(util::read_file(args.domain));
  auto config = load_config(args.dpgc, domain, err);
  if (!config) return kFailure;
  gen::SessionPaths paths{args.out};
  auto r = gen::generate_batch(paths, domain, *config, batch(args.seed, args.count));
  print_gen(out, "", r, paths);
  write_marker(layout, "gen", marker);
  return kOk;
}

int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err) {
  SessionLayout layout{args.session};
  size_t problems = count_problems(layout.problems());
  if (problems == 0) {
    err << "error: no problems in " << layout.problems().string() << "\n";
    return kFailure;
  }
  std::string marker = "adapter=" + args.adapter + " problems=" + std::to_string(problems) + "\n";
  if (read_marker(layout, "plan") == marker) {
    out << "plan: already complete (" << problems << " problems)\n";
    return kOk;
  }
  auto adapter = resolve_adapter(args.adapter, args.registry);
  auto report = planner::plan_batch(adapter, {args.session}, {.timeout_s = args.timeout_s, .workers = args.workers});
  print_plan(out, "", report);
  write_marker(layout, "plan", marker);
  return kOk;
}

int cmd_assemble(const AssembleArgs& args, std::ostream& out, std::ostream& err) {
  if (args.sessions.empty()) {
    err << "error: at least one --session is required\n";
    return kUsage;
  }
  std::vector<dataset::DatasetRecord> records;
  std::vector<std::string> domains, session_names;
  for (const auto& s : args.sessions) {
    auto part = dataset::collect_records(s, args.instruction_prefix);
    std::string tag = pddl::parse_domain(util::read_file(s / "domain.pddl")).name.str();
    if (std::find(domains.begin(), domains.end(), tag) == domains.end()) domains.push_back(tag);
    out << "session " << s.string() << ": " << part.size() << " solved records (" << tag << ")\n";
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    session_names.push_back(s.string());
  }

  dataset::SplitSpec spec;
  if (!args.quotas.empty()) {
    spec.seed = args.seed;
    for (const auto& [d, q] : args.quotas) spec.quotas[d] = q;
  } else if (args.split) {
    spec = dataset::SplitSpec::even(*args.split, domains, args.seed);
  } else {
    err << "error: give --split or --quota\n";
    return kUsage;
  }

  SessionLayout first{args.sessions.front()};
  fs::path out_dir = args.out.value_or(first.dataset());
  std::string marker = spec_text(spec) + " out=" + out_dir.string() + "\n";
  if (read_marker(first, "assemble") == marker && fs::exists(out_dir / "manifest.json")) {
    out << "assemble: already complete (" << out_dir.string() << ")\n";
    return kOk;
  }
  int code = assemble_and_write(std::move(records), spec, out_dir,
                                {.seed = args.seed, .sessions = session_names,
                                 .instruction_prefix = args.instruction_prefix, .workers = args.workers},
                                out, err);
  if (code == kOk) write_marker(first, "assemble", marker);
  return code;
}

int cmd_validate(const fs::path& domain_file, const fs::path& problem_file, const fs::path& plan_file,
                 std::ostream& out, std::ostream&) {
  auto domain = pddl::parse_domain(util::read_file(domain_file));
  auto problem = pddl::parse_problem(util::read_file(problem_file), domain);
  auto plan = validate::parse_plan(util::read_file(plan_file));
  auto report = validate::validate(domain, problem, plan);
  if (report.valid) {
    out << "valid: " << plan.size() << " steps\n";
    return kOk;
  }
  out << "invalid: " << validate::to_string(*report.failure_kind);
  if (report.failure_step) out << " at step " << *report.failure_step + 1;
  out << ": " << report.detail << "\n";
  return kFailure;
}

int cmd_audit(const fs::path& dir, std::ostream& out, std::ostream&) {
  auto report = dataset::audit_leakage({dir / "train.json", dir / "valid.json", dir / "test.json"});
  for (const auto& [file, n] : report.counts) out << file << ": " << n << " records\n";
  for (const auto& x : report.intersections) {
    out << "overlap " << x.first << " / " << x.second << ": " << x.fingerprints.size() << " fingerprints\n";
    for (const auto& fp : x.fingerprints) out << "  " << fp << "\n";
  }
  for (const auto& fp : report.internal_duplicates) out << "repeated within a file: " << fp << "\n";
  out << "leakage audit " << (report.pass() ? "pass" : "FAIL") << "\n";
  return report.pass() ? kOk : kFailure;
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream&) {
  fs::path file = fs::is_directory(args.dataset) ? args.dataset / "test.json" : args.dataset;
  auto records = dataset::read_dataset(file);
  auto endpoint = eval::EndpointConfig::load(args.endpoint);

  std::vector<eval::InferenceRecord> inferences;
  if (args.replay) {
    std::istringstream lines(util::read_file(*args.replay));
    for (std::string line; std::getline(lines, line);)
      if (!line.empty()) inferences.push_back(eval::parse_inference_line(line));
  } else {
    size_t over = 0;
    for (const auto& r : records) over += eval::shape_request(endpoint, r).over_budget;
    if (over > 0)
      out << over << " of " << records.size() << " prompts exceed the " << endpoint.token_budget
          << "-token budget; max_tokens floored at " << endpoint.min_new_tokens << "\n";
    size_t step = std::max<size_t>(records.size() / 10, 1);
    inferences = eval::run_inference(endpoint, records, [&](size_t done, size_t total) {
      if (done % step == 0 || done == total) out << "inference " << done << "/" << total << "\n";
    });
    fs::create_directories(args.out);
    std::string dump;
    for (const auto& r : inferences) dump += eval::inference_line(r) + "\n";
    util::write_file(args.out / "inferences.jsonl", dump);
  }
  auto metrics = eval::score(records, inferences, endpoint.label, endpoint.workers > 1);
  eval::export_report(args.out, metrics);
  out << eval::metrics_text(metrics);
  return kOk;
}

int cmd_pipeline(const PipelineConfig& config, const fs::path& root, std::ostream& out, std::ostream& err) {
  SessionLayout top{root};
  auto adapter = resolve_adapter(config.adapter, config.registry);

  struct Loaded {
    std::string name;
    pddl::Domain domain;
    dpgc::Config config;
    const PipelineDomain* spec;
  };
  std::vector<Loaded> loaded;
  for (const auto& d : config.domains) {
    auto domain = pddl::parse_domain(util::read_file(d.domain));
    auto dpgc = load_config(d.dpgc, domain, err);
    if (!dpgc) return kFailure;
    std::string name = domain.name.str();
    for (const auto& l : loaded)
      if (l.name == name) {
        err << "error: domain " << name << " listed twice\n";
        return kUsage;
      }
    loaded.push_back({name, std::move(domain), std::move(*dpgc), &d});
  }

  std::vector<fs::path> sessions;
  dataset::SplitSpec spec;
  spec.seed = config.seed;
  for (auto& l : loaded) {
    std::string tag = "[" + l.name + "] ";
    SessionLayout layout{root / "sessions" / l.name};
    gen::SessionPaths gpaths{layout.root};
    planner::PlanningPaths ppaths{layout.root};
    sessions.push_back(layout.root);
    spec.quotas[l.name] = l.spec->quota;
    const size_t need = l.spec->quota.total();

    size_t target = std::max(l.spec->generate.value_or(need), need);
    if (fs::exists(gpaths.meta())) target = std::max(target, gen::GenerationSession::load(gpaths).target_count);
    auto g = gen::generate_batch(gpaths, l.domain, l.config, batch(config.seed, target));
    print_gen(out, tag, g, gpaths);
    write_marker(layout, "gen", "seed=" + std::to_string(config.seed) + " count=" + std::to_string(target) + "\n");

    for (size_t round = 0;; ++round) {
      auto report = planner::plan_batch(adapter, ppaths, {.timeout_s = config.timeout_s, .workers = config.workers});
      print_plan(out, tag, report);
      size_t solved = count_solved(ppaths);
      if (solved >= need) break;
      if (round == config.max_rounds) {
        err << tag << "error: " << solved << " solved after " << round << " regeneration rounds, " << need
            << " needed\n";
        return kFailure;
      }
      target += need - solved;
      out << tag << "round " << round + 1 << ": regenerating " << need - solved << " problems\n";
      g = gen::generate_batch(gpaths, l.domain, l.config, batch(config.seed, target));
      print_gen(out, tag, g, gpaths);
      write_marker(layout, "gen", "seed=" + std::to_string(config.seed) + " count=" + std::to_string(target) + "\n");
    }
    write_marker(layout, "plan", "adapter=" + adapter.name + " problems=" + std::to_string(target) + "\n");
  }

  std::string marker = spec_text(spec) + "\n";
  if (read_marker(top, "assemble") == marker && fs::exists(top.dataset() / "manifest.json")) {
    out << "assemble: already complete (" << top.dataset().string() << ")\n";
    return kOk;
  }
  std::vector<dataset::DatasetRecord> records;
  std::vector<std::string> names;
  for (const auto& s : sessions) {
    auto part = dataset::collect_records(s, config.instruction_prefix);
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    names.push_back(s.string());
  }
  int code = assemble_and_write(std::move(records), spec, top.dataset(),
                                {.seed = config.seed, .sessions = names,
                                 .instruction_prefix = config.instruction_prefix, .workers = config.workers},
                                out, err);
  if (code == kOk) write_marker(top, "assemble", marker);
  return code;
}

}  // namespace pddlforge::cli
