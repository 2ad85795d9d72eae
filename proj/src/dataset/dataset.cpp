#include "pddlforge/dataset/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "pddlforge/gen/fingerprint.hpp"
#include "pddlforge/gen/rng.hpp"
#include "pddlforge/pddl/parser.hpp"
#include "pddlforge/planner/driver.hpp"
#include "pddlforge/util/hash.hpp"
#include "pddlforge/util/io.hpp"
#include "pddlforge/validate/validator.hpp"

namespace pddlforge::dataset {

using nlohmann::ordered_json;

namespace {

constexpr int kManifestVersion = 1;

std::string join_shortfall(const std::map<std::string, size_t>& shortfall) {
  std::string out = "insufficient records:";
  for (const auto& [domain, missing] : shortfall) out += " " + domain + " short by " + std::to_string(missing);
  return out;
}

template <typename T>
void shuffle(std::vector<T>& items, gen::Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

size_t parse_count(std::string_view text, std::string_view whole) {
  size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty())
    throw Error("bad split '" + std::string(whole) + "': expected TRAIN/VALID/TEST");
  return value;
}

ordered_json alpaca_json(const DatasetRecord& record) {
  ordered_json j;
  j["instruction"] = record.instruction;
  j["input"] = record.input;
  j["output"] = record.output;
  return j;
}

/// Collects the `input` strings of a top-level array of objects without
/// materializing the other fields.
class InputCollector : public nlohmann::json_sax<nlohmann::json> {
 public:
  std::vector<std::string> inputs;

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t& value) override {
    if (depth_ == 2 && want_) inputs.push_back(std::move(value));
    return scalar();
  }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override {
    ++depth_;
    want_ = false;
    return true;
  }
  bool key(string_t& key) override {
    want_ = depth_ == 2 && key == "input";
    return true;
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    ++depth_;
    return true;
  }
  bool end_array() override {
    --depth_;
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& e) override {
    throw Error("malformed dataset file at byte " + std::to_string(position) + ": " + e.what());
  }

 private:
  bool scalar() {
    want_ = false;
    return true;
  }
  int depth_ = 0;
  bool want_ = false;
};

}  // namespace

InsufficientRecords::InsufficientRecords(std::map<std::string, size_t> shortfall)
    : Error(join_shortfall(shortfall)), shortfall_(std::move(shortfall)) {}

DuplicateRecord::DuplicateRecord(std::string fingerprint)
    : Error("duplicate fingerprint across input records: " + fingerprint), fingerprint_(std::move(fingerprint)) {}

DatasetRecord make_record(std::string domain_text, std::string problem_text, std::string plan_text,
                          std::string domain_tag, std::string_view instruction_prefix) {
  DatasetRecord record;
  record.fingerprint = gen::fingerprint(pddl::parse_problem_unchecked(problem_text));
  record.instruction = instruction_prefix.empty() ? std::move(domain_text)
                                                  : std::string(instruction_prefix) + "\n\n" + domain_text;
  record.input = std::move(problem_text);
  record.output = std::move(plan_text);
  record.domain_tag = std::move(domain_tag);
  return record;
}

std::string_view domain_text_of(std::string_view instruction) {
  auto pos = instruction.find("(define");
  return pos == std::string_view::npos ? instruction : instruction.substr(pos);
}

std::vector<DatasetRecord> collect_records(const fs::path& session, std::string_view instruction_prefix) {
  planner::PlanningPaths paths{session};
  std::string domain_text = util::read_file(paths.domain());
  std::string tag = pddl::parse_domain(domain_text).name.str();
  std::vector<planner::PlanningLogEntry> entries;
  if (fs::exists(paths.log())) entries = planner::read_planning_log(paths.log());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.problem < b.problem; });

  std::vector<DatasetRecord> records;
  for (const auto& entry : entries) {
    if (entry.status != planner::PlanStatus::solved) continue;
    std::string problem = util::read_file(paths.problems() / (entry.problem + ".pddl"));
    std::string plan = util::read_file(paths.plans() / (entry.problem + ".plan"));
    records.push_back(make_record(domain_text, std::move(problem), std::move(plan), tag, instruction_prefix));
  }
  return records;
}

SplitCounts SplitCounts::parse(std::string_view text) {
  auto a = text.find('/');
  auto b = a == std::string_view::npos ? a : text.find('/', a + 1);
  if (b == std::string_view::npos || text.find('/', b + 1) != std::string_view::npos)
    throw Error("bad split '" + std::string(text) + "': expected TRAIN/VALID/TEST");
  return {parse_count(text.substr(0, a), text), parse_count(text.substr(a + 1, b - a - 1), text),
          parse_count(text.substr(b + 1), text)};
}

SplitCounts SplitSpec::totals() const {
  SplitCounts sum;
  for (const auto& [_, q] : quotas) {
    sum.train += q.train;
    sum.valid += q.valid;
    sum.test += q.test;
  }
  return sum;
}

SplitSpec SplitSpec::even(SplitCounts totals, const std::vector<std::string>& domains, uint64_t seed) {
  if (domains.empty()) throw Error("no domains to split between");
  size_t n = domains.size();
  if (totals.train % n || totals.valid % n || totals.test % n)
    throw Error("split does not divide evenly between " + std::to_string(n) + " domains");
  SplitSpec spec;
  spec.seed = seed;
  for (const auto& d : domains) spec.quotas[d] = {totals.train / n, totals.valid / n, totals.test / n};
  return spec;
}

AssembledDataset assemble(std::vector<DatasetRecord> records, const SplitSpec& spec) {
  std::unordered_set<std::string> seen;
  for (const auto& r : records)
    if (!seen.insert(r.fingerprint).second) throw DuplicateRecord(r.fingerprint);

  std::map<std::string, std::vector<DatasetRecord>> groups;
  for (auto& r : records) groups[r.domain_tag].push_back(std::move(r));

  std::map<std::string, size_t> shortfall;
  for (const auto& [domain, quota] : spec.quotas) {
    size_t have = groups.count(domain) ? groups[domain].size() : 0;
    if (have < quota.total()) shortfall[domain] = quota.total() - have;
  }
  if (!shortfall.empty()) throw InsufficientRecords(shortfall);

  gen::Rng rng(spec.seed);
  AssembledDataset out;
  for (auto& [domain, group] : groups) {
    std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) { return a.fingerprint < b.fingerprint; });
    auto quota_it = spec.quotas.find(domain);
    if (quota_it == spec.quotas.end()) {
      for (auto& r : group) out.spillover.push_back(std::move(r));
      continue;
    }
    shuffle(group, rng);
    const SplitCounts& q = quota_it->second;
    size_t i = 0;
    auto take = [&](std::vector<DatasetRecord>& dest, size_t n) {
      for (size_t end = i + n; i < end; ++i) dest.push_back(std::move(group[i]));
    };
    take(out.train, q.train);
    take(out.valid, q.valid);
    take(out.test, q.test);
    take(out.spillover, group.size() - i);
  }
  shuffle(out.train, rng);
  shuffle(out.valid, rng);
  shuffle(out.test, rng);
  return out;
}

std::string to_alpaca(const DatasetRecord& record) { return alpaca_json(record).dump(2); }

std::string dataset_json(const std::vector<DatasetRecord>& records) {
  ordered_json array = ordered_json::array();
  for (const auto& r : records) array.push_back(alpaca_json(r));
  return array.dump(2) + "\n";
}

std::vector<DatasetRecord> read_dataset(const fs::path& file) {
  ordered_json array;
  try {
    array = ordered_json::parse(util::read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw Error(file.string() + ": " + e.what());
  }
  if (!array.is_array()) throw Error(file.string() + ": expected a JSON array");
  std::vector<DatasetRecord> records;
  records.reserve(array.size());
  for (size_t i = 0; i < array.size(); ++i) {
    const auto& j = array[i];
    auto field = [&](const char* key) -> std::string {
      if (!j.is_object() || !j.contains(key) || !j[key].is_string())
        throw Error(file.string() + ": record " + std::to_string(i) + " lacks string '" + key + "'");
      return j[key].get<std::string>();
    };
    DatasetRecord r;
    r.instruction = field("instruction");
    r.input = field("input");
    r.output = field("output");
    auto problem = pddl::parse_problem_unchecked(r.input);
    r.fingerprint = gen::fingerprint(problem);
    r.domain_tag = problem.domain.str();
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<std::string> revalidate(const std::vector<DatasetRecord>& records, size_t workers) {
  std::mutex mutex;
  std::unordered_map<std::string, std::shared_ptr<const pddl::Domain>> domains;
  auto domain_for = [&](std::string_view text) {
    std::lock_guard lock(mutex);
    auto key = util::hash_hex(text);
    auto it = domains.find(key);
    if (it == domains.end())
      it = domains.emplace(key, std::make_shared<const pddl::Domain>(pddl::parse_domain(text))).first;
    return it->second;
  };

  std::vector<std::string> failures(records.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next++) < records.size();) {
      const auto& r = records[i];
      try {
        auto domain = domain_for(domain_text_of(r.instruction));
        auto problem = pddl::parse_problem(r.input, *domain);
        auto report = validate::validate(*domain, problem, validate::parse_plan(r.output));
        if (!report.valid) failures[i] = r.fingerprint + ": " + report.detail;
      } catch (const std::exception& e) {
        failures[i] = r.fingerprint + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (size_t t = 1; t < std::max<size_t>(workers, 1); ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();

  std::vector<std::string> out;
  for (auto& f : failures)
    if (!f.empty()) out.push_back(std::move(f));
  return out;
}

std::string write_dataset(const fs::path& dir, const AssembledDataset& data, const WriteOptions& options) {
  for (const auto* split : {&data.train, &data.valid, &data.test}) {
    auto failures = revalidate(*split, options.workers);
    if (!failures.empty())
      throw Error("re-validation failed for " + std::to_string(failures.size()) + " records, first: " +
                  failures.front());
  }

  fs::create_directories(dir);
  ordered_json manifest;
  manifest["version"] = kManifestVersion;
  manifest["seed"] = options.seed;
  manifest["sessions"] = options.sessions;
  manifest["instruction_prefix"] = options.instruction_prefix;
  ordered_json files = ordered_json::object();
  std::pair<const char*, const std::vector<DatasetRecord>*> outputs[] = {
      {"train.json", &data.train}, {"valid.json", &data.valid}, {"test.json", &data.test},
      {"spillover.json", &data.spillover}};
  for (const auto& [name, records] : outputs) {
    std::string text = dataset_json(*records);
    util::write_file(dir / name, text);
    std::map<std::string, size_t> per_domain;
    for (const auto& r : *records) ++per_domain[r.domain_tag];
    ordered_json entry;
    entry["count"] = records->size();
    entry["hash"] = util::hash_hex(text);
    entry["domains"] = per_domain;
    files[name] = entry;
  }
  manifest["files"] = files;
  std::string text = manifest.dump(2) + "\n";
  util::write_file(dir / "manifest.json", text);
  return text;
}

LeakageReport audit_leakage(const std::vector<fs::path>& files) {
  LeakageReport report;
  std::vector<std::set<std::string>> sets;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot read " + file.string());
    InputCollector collector;
    nlohmann::json::sax_parse(in, &collector);
    std::set<std::string> fps;
    for (const auto& input : collector.inputs) {
      auto fp = gen::fingerprint(pddl::parse_problem_unchecked(input));
      if (!fps.insert(fp).second) report.internal_duplicates.push_back(fp);
    }
    report.counts[file.filename().string()] = collector.inputs.size();
    sets.push_back(std::move(fps));
  }
  for (size_t a = 0; a < sets.size(); ++a) {
    for (size_t b = a + 1; b < sets.size(); ++b) {
      Intersection x{files[a].filename().string(), files[b].filename().string(), {}};
      std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                            std::back_inserter(x.fingerprints));
      if (!x.fingerprints.empty()) report.intersections.push_back(std::move(x));
    }
  }
  return report;
}

}  // namespace pddlforge::dataset
