#include "pddlforge/gen/session.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "pddlforge/gen/fingerprint.hpp"
#include "pddlforge/pddl/serialize.hpp"
#include "pddlforge/util/hash.hpp"
#include "pddlforge/util/io.hpp"

namespace pddlforge::gen {

std::string problem_name(const pddl::Symbol& domain, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return domain.str() + "_" + buf;
}

GenerationSession GenerationSession::load(const SessionPaths& paths) {
  GenerationSession s;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(util::read_file(paths.meta()));
    s.seed = meta.at("seed").get<uint64_t>();
    s.target_count = meta.at("target").get<size_t>();
    s.domain_name = meta.at("domain").get<std::string>();
    s.config_hash = meta.at("config_hash").get<std::string>();
    s.domain_hash = meta.at("domain_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("corrupt " + paths.meta().string() + ": " + e.what());
  }
  if (fs::exists(paths.journal())) {
    std::istringstream in(util::read_file(paths.journal()));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) s.journal.push_back(line);
    }
  }
  return s;
}

namespace {

void write_meta(const SessionPaths& paths, const GenerationSession& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["target"] = s.target_count;
  j["domain"] = s.domain_name;
  j["config_hash"] = s.config_hash;
  j["domain_hash"] = s.domain_hash;
  util::write_file(paths.meta(), j.dump(2) + "\n");
}

}  // namespace

BatchResult generate_batch(const SessionPaths& paths, const pddl::Domain& domain, const dpgc::Config& config,
                           const BatchOptions& options) {
  std::string config_text = dpgc::serialize_config(config);
  std::string domain_text = pddl::serialize_domain(domain);
  std::string config_hash = util::hash_hex(config_text);
  std::string domain_hash = util::hash_hex(domain_text);

  GenerationSession session;
  if (fs::exists(paths.meta())) {
    session = GenerationSession::load(paths);
    if (session.seed != options.seed) {
      throw SessionMismatch("session " + paths.root.string() + " was started with seed " +
                            std::to_string(session.seed) + ", not " + std::to_string(options.seed));
    }
    if (session.config_hash != config_hash) throw SessionMismatch("config differs from the session's config");
    if (session.domain_hash != domain_hash) throw SessionMismatch("domain differs from the session's domain");
    if (options.target > session.target_count) {
      session.target_count = options.target;
      write_meta(paths, session);
    }
  } else {
    session.seed = options.seed;
    session.target_count = options.target;
    session.domain_name = domain.name.str();
    session.config_hash = config_hash;
    session.domain_hash = domain_hash;
    fs::create_directories(paths.problems());
    util::write_file(paths.config(), config_text);
    util::write_file(paths.domain(), domain_text);
    write_meta(paths, session);
  }

  BatchResult result;
  const size_t target = std::max(options.target, session.emitted_count());
  std::unordered_set<std::string> seen;
  size_t consecutive = 0;
  auto started = std::chrono::steady_clock::now();

  // Attempts are replayed from 0 so that resuming only needs the journal.
  for (uint64_t attempt = 0; seen.size() < target; ++attempt) {
    size_t index = seen.size();
    bool replaying = index < session.journal.size();
    if (!replaying && options.stop_after && result.emitted_now >= *options.stop_after) break;

    std::string name = problem_name(domain.name, index + 1);
    Rng rng = Rng::for_attempt(session.seed, attempt);
    pddl::Problem problem = generate_problem(domain, config, rng, pddl::Symbol(name));
    std::string fp = fingerprint(problem);

    if (seen.contains(fp)) {
      ++consecutive;
      if (!replaying) ++result.duplicates;
      if (consecutive >= options.max_consecutive_duplicates) {
        throw NonConvergence(std::to_string(consecutive) + " consecutive draws were duplicates after " +
                             std::to_string(index) + " unique problems (target " + std::to_string(target) +
                             "); the config cannot produce enough distinct problems");
      }
      continue;
    }

    fs::path file = paths.problems() / (name + ".pddl");
    if (replaying) {
      if (session.journal[index] != fp) {
        throw SessionMismatch("journal entry " + std::to_string(index + 1) + " does not match the replayed sequence");
      }
      if (!fs::exists(file)) util::write_file(file, pddl::serialize_problem(problem));
    } else {
      bool trivial = is_trivial(problem);
      util::write_file(file, pddl::serialize_problem(problem));
      util::append_line(paths.journal(), fp);
      auto now = std::chrono::steady_clock::now();
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f", std::chrono::duration<double, std::milli>(now - started).count());
      util::append_line(paths.log(), name + " attempt=" + std::to_string(attempt) + " redraws=" +
                                         std::to_string(consecutive) + " ms=" + ms + " fp=" + fp +
                                         " trivial=" + (trivial ? "1" : "0"));
      started = now;
      ++result.emitted_now;
      result.trivial += trivial;
    }
    seen.insert(fp);
    consecutive = 0;
  }

  result.emitted_total = seen.size();
  result.complete = seen.size() >= target;
  return result;
}

}  // namespace pddlforge::gen
