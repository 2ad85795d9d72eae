#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pddlforge/error.hpp"

namespace pddlforge::dataset {

namespace fs = std::filesystem;

/// One Alpaca record: domain text, problem text, plan text.
struct DatasetRecord {
  std::string instruction;
  std::string input;
  std::string output;
  /// Problem fingerprint of `input`.
  std::string fingerprint;
  std::string domain_tag;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// Builds a record, computing the fingerprint from `input`. A non-empty
/// `instruction_prefix` is placed before the domain text, separated by a blank
/// line.
DatasetRecord make_record(std::string domain_text, std::string problem_text, std::string plan_text,
                          std::string domain_tag, std::string_view instruction_prefix = {});

/// The domain text inside an instruction, without any prefix.
std::string_view domain_text_of(std::string_view instruction);

/// Records for every solved problem of a session directory (domain.pddl,
/// problems/, plans/, logs/planning.log), in problem order.
std::vector<DatasetRecord> collect_records(const fs::path& session, std::string_view instruction_prefix = {});

struct SplitCounts {
  size_t train = 0;
  size_t valid = 0;
  size_t test = 0;

  size_t total() const { return train + valid + test; }
  /// `800/100/100`
  static SplitCounts parse(std::string_view text);
  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct SplitSpec {
  /// Quotas per domain tag.
  std::map<std::string, SplitCounts> quotas;
  uint64_t seed = 0;

  SplitCounts totals() const;
  /// Divides `totals` equally between `domains`; throws if a count does not
  /// divide evenly.
  static SplitSpec even(SplitCounts totals, const std::vector<std::string>& domains, uint64_t seed);
};

class InsufficientRecords : public Error {
 public:
  explicit InsufficientRecords(std::map<std::string, size_t> shortfall);
  /// Missing records per domain tag.
  const std::map<std::string, size_t>& shortfall() const { return shortfall_; }

 private:
  std::map<std::string, size_t> shortfall_;
};

class DuplicateRecord : public Error {
 public:
  explicit DuplicateRecord(std::string fingerprint);
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  std::string fingerprint_;
};

struct AssembledDataset {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> valid;
  std::vector<DatasetRecord> test;
  /// Surplus records, kept for growing the dataset later.
  std::vector<DatasetRecord> spillover;
};

/// Deterministic in (records, spec): each domain's records are ordered by
/// fingerprint, shuffled with the seed, and cut into the domain's quotas; each
/// split is then shuffled. Records of domains without a quota go to spillover.
AssembledDataset assemble(std::vector<DatasetRecord> records, const SplitSpec& spec);

/// `{"instruction", "input", "output"}` in that key order, as JSON text.
std::string to_alpaca(const DatasetRecord& record);

/// A dataset file: a JSON array of Alpaca objects.
std::string dataset_json(const std::vector<DatasetRecord>& records);

/// Reads a dataset file back. Domain tags come from the problems' `:domain`.
std::vector<DatasetRecord> read_dataset(const fs::path& file);

/// Validates every output against its own instruction and input. Returns one
/// message per failing record (empty when all pass).
std::vector<std::string> revalidate(const std::vector<DatasetRecord>& records, size_t workers = 1);

struct WriteOptions {
  uint64_t seed = 0;
  std::vector<std::string> sessions;
  std::string instruction_prefix;
  size_t workers = 1;
};

/// Writes train.json, valid.json, test.json, spillover.json and manifest.json
/// into `dir` after the re-validation gate passes (throws otherwise). Returns
/// the manifest text.
std::string write_dataset(const fs::path& dir, const AssembledDataset& data, const WriteOptions& options);

struct Intersection {
  std::string first;
  std::string second;
  std::vector<std::string> fingerprints;
};

struct LeakageReport {
  std::map<std::string, size_t> counts;
  std::vector<Intersection> intersections;
  /// Fingerprints repeated within a single file.
  std::vector<std::string> internal_duplicates;

  bool pass() const { return intersections.empty() && internal_duplicates.empty(); }
};

/// Recomputes fingerprints from the `input` fields of the given files and
/// reports pairwise overlaps.
LeakageReport audit_leakage(const std::vector<fs::path>& files);

}  // namespace pddlforge::dataset
