#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pddlforge/dataset/dataset.hpp"
#include "pddlforge/error.hpp"
#include "pddlforge/stats.hpp"
#include "pddlforge/validate/validator.hpp"

namespace pddlforge::eval {

namespace fs = std::filesystem;

class EndpointError : public Error {
 public:
  using Error::Error;
};

/// A text-completion endpoint. The request body is
/// `{"prompt", "temperature", "max_tokens"}` plus `model` when set and the
/// members of `extra_body`; the generated text is read at `response_pointer`.
struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8080";
  std::string route = "/v1/completions";
  std::string model;
  /// `{instruction}` and `{input}` are replaced by the record fields.
  std::string prompt_template = "{instruction}\n\n{input}\n";
  double temperature = 0.01;
  /// Prompt plus generated tokens.
  size_t token_budget = 3096;
  /// Characters per token for estimating prompt length.
  double chars_per_token = 4.0;
  /// Lower bound on max_tokens when the prompt alone fills the budget.
  size_t min_new_tokens = 512;
  double timeout_s = 120;
  std::string response_pointer = "/choices/0/text";
  /// JSON object text merged into every request body.
  std::string extra_body = "{}";
  /// Retry once on transport errors (never on invalid plans).
  bool retry_once = false;
  /// Concurrent requests; above 1 the report marks latencies as parallel.
  size_t workers = 1;
  /// Row label in the report tables.
  std::string label = "model";

  /// Unknown keys and out-of-range values are errors.
  static EndpointConfig parse(std::string_view json_text);
  static EndpointConfig load(const fs::path& path);
};

/// Throws EndpointError on a placeholder other than {instruction} and {input}.
std::string render_prompt(std::string_view prompt_template, const dataset::DatasetRecord& record);

size_t estimate_tokens(std::string_view text, double chars_per_token);

struct RequestShape {
  std::string prompt;
  size_t prompt_tokens = 0;
  size_t max_tokens = 0;
  /// Prompt estimate plus max_tokens exceeds the budget.
  bool over_budget = false;
};

RequestShape shape_request(const EndpointConfig& endpoint, const dataset::DatasetRecord& record);

enum class InferenceStatus { ok, transport_error, http_error, bad_response };

std::string_view to_string(InferenceStatus status);
InferenceStatus inference_status_from_string(std::string_view text);

struct InferenceRecord {
  /// Index into the test set.
  size_t id = 0;
  std::string text;
  double latency = 0;
  InferenceStatus status = InferenceStatus::ok;
  std::string detail;
  bool over_budget = false;
};

/// One JSON object per line: id, text, latency, status.
std::string inference_line(const InferenceRecord& record);
InferenceRecord parse_inference_line(std::string_view line);

using ProgressFn = std::function<void(size_t done, size_t total)>;

/// One request per record, results in record order. Throws EndpointError if
/// the endpoint cannot be reached before the first request.
std::vector<InferenceRecord> run_inference(const EndpointConfig& endpoint,
                                           const std::vector<dataset::DatasetRecord>& records,
                                           const ProgressFn& progress = {});

/// Verdict for one generated text.
struct Verdict {
  bool valid = false;
  size_t steps = 0;
  /// Validator failure kind, `unparseable`, or `no_response`.
  std::string failure;
};

/// Parses the generated text as a plan (falling back to the lenient listing
/// grammar) and validates it against the record's domain and problem.
Verdict judge(const dataset::DatasetRecord& record, const InferenceRecord& inference);

struct MetricsRow {
  std::string label;
  size_t records = 0;
  validate::ValidityRate validity;
  /// Over valid plans only.
  Summary steps;
  /// Over completed inferences, valid or not.
  Summary time;
  std::map<std::string, size_t> failures;
};

struct EvalMetrics {
  std::string label;
  bool parallel = false;
  /// Overall row, then one row per domain when there is more than one.
  std::vector<MetricsRow> rows;
};

/// Pure in its inputs; inference order does not matter. Every inference id
/// must index `records`.
EvalMetrics score(const std::vector<dataset::DatasetRecord>& records,
                  const std::vector<InferenceRecord>& inferences, std::string label = "model",
                  bool parallel = false);

/// Aligned plain-text tables: validity and steps, then times, then failures.
std::string metrics_text(const EvalMetrics& metrics);
std::string metrics_json(const EvalMetrics& metrics);

/// Writes metrics.txt and metrics.json into `dir`.
void export_report(const fs::path& dir, const EvalMetrics& metrics);

}  // namespace pddlforge::eval
