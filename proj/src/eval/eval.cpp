#include "pddlforge/eval/eval.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "pddlforge/pddl/parser.hpp"
#include "pddlforge/planner/normalize.hpp"
#include "pddlforge/util/hash.hpp"
#include "pddlforge/util/io.hpp"

namespace pddlforge::eval {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

/// Integers print without decimals, halves keep one.
std::string compact(double value) {
  return value == std::floor(value) ? fixed(value, 0) : fixed(value, 1);
}

/// The first `left` columns are left-aligned, the rest right-aligned.
std::string table(const std::vector<std::vector<std::string>>& rows, size_t left = 1) {
  std::vector<size_t> widths;
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) {
      if (widths.size() <= c) widths.push_back(0);
      widths[c] = std::max(widths[c], row[c].size());
    }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      std::string pad(widths[c] - row[c].size(), ' ');
      line += c < left ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

ordered_json summary_json(const Summary& s, bool with_std) {
  ordered_json j;
  j["count"] = s.count;
  j["avg"] = s.avg;
  j["min"] = s.min;
  j["max"] = s.max;
  j["median"] = s.median;
  if (with_std) j["std"] = s.std;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EndpointConfig EndpointConfig::parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw EndpointError(std::string("endpoint config: ") + e.what());
  }
  if (!j.is_object()) throw EndpointError("endpoint config: expected an object");
  EndpointConfig c;
  auto str = [&](const std::string& key, std::string& out) {
    if (!j[key].is_string()) throw EndpointError("endpoint config: '" + key + "' must be a string");
    out = j[key].get<std::string>();
  };
  auto num = [&](const std::string& key, double& out) {
    if (!j[key].is_number()) throw EndpointError("endpoint config: '" + key + "' must be a number");
    out = j[key].get<double>();
  };
  auto count = [&](const std::string& key, size_t& out) {
    if (!j[key].is_number_unsigned()) throw EndpointError("endpoint config: '" + key + "' must be a count");
    out = j[key].get<size_t>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "base_url") str(key, c.base_url);
    else if (key == "route") str(key, c.route);
    else if (key == "model") str(key, c.model);
    else if (key == "prompt_template") str(key, c.prompt_template);
    else if (key == "temperature") num(key, c.temperature);
    else if (key == "token_budget") count(key, c.token_budget);
    else if (key == "chars_per_token") num(key, c.chars_per_token);
    else if (key == "min_new_tokens") count(key, c.min_new_tokens);
    else if (key == "timeout_s") num(key, c.timeout_s);
    else if (key == "response_pointer") str(key, c.response_pointer);
    else if (key == "workers") count(key, c.workers);
    else if (key == "label") str(key, c.label);
    else if (key == "retry_once") {
      if (!value.is_boolean()) throw EndpointError("endpoint config: 'retry_once' must be a boolean");
      c.retry_once = value.get<bool>();
    } else if (key == "extra_body") {
      if (!value.is_object()) throw EndpointError("endpoint config: 'extra_body' must be an object");
      c.extra_body = value.dump();
    } else {
      throw EndpointError("endpoint config: unknown key '" + key + "'");
    }
  }
  if (c.temperature < 0) throw EndpointError("endpoint config: temperature must be >= 0");
  if (c.chars_per_token <= 0) throw EndpointError("endpoint config: chars_per_token must be > 0");
  if (c.timeout_s <= 0) throw EndpointError("endpoint config: timeout_s must be > 0");
  if (c.workers == 0) throw EndpointError("endpoint config: workers must be >= 1");
  if (c.min_new_tokens == 0) throw EndpointError("endpoint config: min_new_tokens must be >= 1");
  try {
    json::json_pointer pointer(c.response_pointer);
  } catch (const json::exception& e) {
    throw EndpointError("endpoint config: bad response_pointer: " + std::string(e.what()));
  }
  dataset::DatasetRecord probe;
  render_prompt(c.prompt_template, probe);
  return c;
}

EndpointConfig EndpointConfig::load(const fs::path& path) { return parse(util::read_file(path)); }

std::string render_prompt(std::string_view prompt_template, const dataset::DatasetRecord& record) {
  std::string out;
  size_t i = 0;
  while (i < prompt_template.size()) {
    if (prompt_template[i] != '{') {
      out += prompt_template[i++];
      continue;
    }
    auto close = prompt_template.find('}', i);
    if (close == std::string_view::npos) throw EndpointError("prompt template: unterminated placeholder");
    auto name = prompt_template.substr(i + 1, close - i - 1);
    if (name == "instruction") out += record.instruction;
    else if (name == "input") out += record.input;
    else throw EndpointError("prompt template: unknown placeholder {" + std::string(name) + "}");
    i = close + 1;
  }
  return out;
}

size_t estimate_tokens(std::string_view text, double chars_per_token) {
  return static_cast<size_t>(std::ceil(static_cast<double>(text.size()) / chars_per_token));
}

RequestShape shape_request(const EndpointConfig& endpoint, const dataset::DatasetRecord& record) {
  RequestShape s;
  s.prompt = render_prompt(endpoint.prompt_template, record);
  s.prompt_tokens = estimate_tokens(s.prompt, endpoint.chars_per_token);
  size_t room = endpoint.token_budget > s.prompt_tokens ? endpoint.token_budget - s.prompt_tokens : 0;
  s.max_tokens = std::max(room, endpoint.min_new_tokens);
  s.over_budget = s.prompt_tokens + s.max_tokens > endpoint.token_budget;
  return s;
}

std::string_view to_string(InferenceStatus status) {
  switch (status) {
    case InferenceStatus::ok: return "ok";
    case InferenceStatus::transport_error: return "transport_error";
    case InferenceStatus::http_error: return "http_error";
    case InferenceStatus::bad_response: return "bad_response";
  }
  return "?";
}

InferenceStatus inference_status_from_string(std::string_view text) {
  for (auto s : {InferenceStatus::ok, InferenceStatus::transport_error, InferenceStatus::http_error,
                 InferenceStatus::bad_response})
    if (to_string(s) == text) return s;
  throw Error("unknown inference status '" + std::string(text) + "'");
}

std::string inference_line(const InferenceRecord& record) {
  ordered_json j;
  j["id"] = record.id;
  j["text"] = record.text;
  j["latency"] = record.latency;
  j["status"] = to_string(record.status);
  return j.dump();
}

InferenceRecord parse_inference_line(std::string_view line) {
  try {
    auto j = json::parse(line);
    InferenceRecord r;
    r.id = j.at("id").get<size_t>();
    r.text = j.at("text").get<std::string>();
    r.latency = j.at("latency").get<double>();
    r.status = inference_status_from_string(j.at("status").get<std::string>());
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("bad inference line: ") + e.what());
  }
}

std::vector<InferenceRecord> run_inference(const EndpointConfig& endpoint,
                                           const std::vector<dataset::DatasetRecord>& records,
                                           const ProgressFn& progress) {
  auto make_client = [&] {
    auto client = std::make_unique<httplib::Client>(endpoint.base_url);
    if (!client->is_valid()) throw EndpointError("bad endpoint url '" + endpoint.base_url + "'");
    auto secs = std::chrono::duration<double>(endpoint.timeout_s);
    client->set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    client->set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    client->set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
    client->set_keep_alive(true);
    client->set_tcp_nodelay(true);
    return client;
  };

  {
    auto client = make_client();
    auto res = client->Get("/");
    if (!res) throw EndpointError("endpoint unreachable at " + endpoint.base_url + ": " + httplib::to_string(res.error()));
  }

  json extra = json::parse(endpoint.extra_body);
  json::json_pointer pointer(endpoint.response_pointer);
  std::vector<InferenceRecord> out(records.size());
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  std::mutex progress_mutex;

  auto work = [&] {
    auto client = make_client();
    for (size_t i; (i = next++) < records.size();) {
      auto shape = shape_request(endpoint, records[i]);
      json body = extra;
      body["prompt"] = shape.prompt;
      body["temperature"] = endpoint.temperature;
      body["max_tokens"] = shape.max_tokens;
      if (!endpoint.model.empty()) body["model"] = endpoint.model;
      std::string payload = body.dump();

      InferenceRecord& r = out[i];
      r.id = i;
      r.over_budget = shape.over_budget;
      for (int attempt = 0; attempt < (endpoint.retry_once ? 2 : 1); ++attempt) {
        auto t0 = std::chrono::steady_clock::now();
        auto res = client->Post(endpoint.route, payload, "application/json");
        r.latency = seconds_since(t0);
        if (!res) {
          r.status = InferenceStatus::transport_error;
          r.detail = httplib::to_string(res.error());
          continue;
        }
        if (res->status != 200) {
          r.status = InferenceStatus::http_error;
          r.detail = "HTTP " + std::to_string(res->status);
          break;
        }
        try {
          auto reply = json::parse(res->body);
          const auto& text = reply.at(pointer);
          if (!text.is_string()) throw EndpointError("not a string");
          r.text = text.get<std::string>();
          r.status = InferenceStatus::ok;
          r.detail.clear();
        } catch (const std::exception& e) {
          r.status = InferenceStatus::bad_response;
          r.detail = e.what();
        }
        break;
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, records.size());
      }
    }
  };

  std::vector<std::thread> threads;
  for (size_t t = 1; t < std::min(endpoint.workers, std::max<size_t>(records.size(), 1)); ++t)
    threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  return out;
}

Verdict judge(const dataset::DatasetRecord& record, const InferenceRecord& inference) {
  Verdict v;
  if (inference.status != InferenceStatus::ok) {
    v.failure = "no_response";
    return v;
  }
  validate::Plan plan;
  try {
    plan = validate::parse_plan(inference.text);
  } catch (const Error&) {
    try {
      plan = validate::parse_plan(planner::normalize_output(planner::Dialect::probe, inference.text));
    } catch (const Error&) {
      v.failure = "unparseable";
      return v;
    }
  }
  if (plan.steps.empty()) {
    v.failure = "unparseable";
    return v;
  }
  auto domain = pddl::parse_domain(dataset::domain_text_of(record.instruction));
  auto problem = pddl::parse_problem(record.input, domain);
  auto report = validate::validate(domain, problem, plan);
  v.valid = report.valid;
  v.steps = plan.size();
  if (!report.valid) v.failure = std::string(validate::to_string(*report.failure_kind));
  return v;
}

EvalMetrics score(const std::vector<dataset::DatasetRecord>& records,
                  const std::vector<InferenceRecord>& inferences, std::string label, bool parallel) {
  std::vector<const InferenceRecord*> sorted;
  for (const auto& inf : inferences) {
    if (inf.id >= records.size()) throw Error("inference id " + std::to_string(inf.id) + " out of range");
    sorted.push_back(&inf);
  }
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a->id < b->id; });

  struct Acc {
    size_t valid = 0, total = 0;
    std::vector<double> steps, times;
    std::map<std::string, size_t> failures;
  };
  std::map<std::string, Acc> per_domain;
  Acc all;
  for (const auto* inf : sorted) {
    const auto& record = records[inf->id];
    Verdict v;
    if (inf->status != InferenceStatus::ok) {
      v.failure = "no_response";
    } else {
      v = judge(record, *inf);
    }
    std::string tag = record.domain_tag;
    if (tag.empty()) tag = pddl::parse_problem_unchecked(record.input).domain.str();
    for (Acc* acc : {&all, &per_domain[tag]}) {
      ++acc->total;
      if (v.valid) {
        ++acc->valid;
        acc->steps.push_back(static_cast<double>(v.steps));
      } else {
        ++acc->failures[v.failure];
      }
      if (inf->status == InferenceStatus::ok) acc->times.push_back(inf->latency);
    }
  }

  auto row = [](std::string name, const Acc& acc) {
    MetricsRow r;
    r.label = std::move(name);
    r.records = acc.total;
    r.validity = {acc.valid, acc.total};
    r.steps = summarize(acc.steps);
    r.time = summarize(acc.times);
    r.failures = acc.failures;
    return r;
  };

  EvalMetrics m;
  m.label = label;
  m.parallel = parallel;
  if (per_domain.size() <= 1) {
    m.rows.push_back(row(label, all));
  } else {
    std::string names;
    for (const auto& [tag, _] : per_domain) names += (names.empty() ? "" : " & ") + tag;
    m.rows.push_back(row(label + " (" + names + ")", all));
    for (const auto& [tag, acc] : per_domain) m.rows.push_back(row(label + " (" + tag + ")", acc));
  }
  return m;
}

std::string metrics_text(const EvalMetrics& metrics) {
  std::string out = "# timing statistics include invalid generations\n";
  if (metrics.parallel) out += "# latencies measured with parallel requests; not comparable to sequential runs\n";

  std::vector<std::vector<std::string>> t1{
      {"Solver", "Validity (%)", "Avg_steps", "Min_steps", "Max_steps", "Median_steps"}};
  std::vector<std::vector<std::string>> t2{
      {"Solver", "Avg_t (s)", "Min_t (s)", "Max_t (s)", "Median_t (s)", "Std_t (s)"}};
  std::vector<std::vector<std::string>> t3{{"Solver", "Failure", "Count"}};
  for (const auto& r : metrics.rows) {
    bool any = r.steps.count > 0;
    t1.push_back({r.label, r.validity.str(), any ? fixed(r.steps.avg, 2) : "-", any ? compact(r.steps.min) : "-",
                  any ? compact(r.steps.max) : "-", any ? compact(r.steps.median) : "-"});
    bool timed = r.time.count > 0;
    auto t = [&](double v) { return timed ? fixed(v, 3) : std::string("-"); };
    t2.push_back({r.label, t(r.time.avg), t(r.time.min), t(r.time.max), t(r.time.median), t(r.time.std)});
    for (const auto& [kind, n] : r.failures) t3.push_back({r.label, kind, std::to_string(n)});
  }
  out += "\n" + table(t1) + "\n" + table(t2);
  if (t3.size() > 1) out += "\n" + table(t3, 2);
  return out;
}

std::string metrics_json(const EvalMetrics& metrics) {
  ordered_json j;
  j["label"] = metrics.label;
  j["parallel"] = metrics.parallel;
  j["timing_includes_invalid"] = true;
  ordered_json rows = ordered_json::array();
  for (const auto& r : metrics.rows) {
    ordered_json row;
    row["label"] = r.label;
    row["records"] = r.records;
    row["valid"] = r.validity.valid;
    row["validity"] = r.validity.percent();
    row["steps"] = summary_json(r.steps, false);
    row["time_s"] = summary_json(r.time, true);
    row["failures"] = r.failures;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

void export_report(const fs::path& dir, const EvalMetrics& metrics) {
  fs::create_directories(dir);
  util::write_file(dir / "metrics.txt", metrics_text(metrics));
  util::write_file(dir / "metrics.json", metrics_json(metrics));
}

}  // namespace pddlforge::eval
