#include "pddlforge/planner/driver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "pddlforge/pddl/parser.hpp"
#include "pddlforge/planner/normalize.hpp"
#include "pddlforge/planner/reference.hpp"
#include "pddlforge/util/io.hpp"
#include "pddlforge/validate/validator.hpp"

namespace pddlforge::planner {

namespace {

using Clock = std::chrono::steady_clock;

constexpr size_t kMaxCapture = 16u << 20;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::optional<fs::path> resolve_executable(const std::string& exe) {
  auto runnable = [](const fs::path& p) { return ::access(p.c_str(), X_OK) == 0 && !fs::is_directory(p); };
  if (exe.find('/') != std::string::npos) {
    if (runnable(exe)) return fs::path(exe);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "/usr/bin:/bin");
  for (std::string dir; std::getline(dirs, dir, ':');) {
    fs::path candidate = fs::path(dir.empty() ? "." : dir) / exe;
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::string substitute(const std::string& arg, const std::map<std::string, std::string>& values) {
  std::string out;
  for (size_t i = 0; i < arg.size();) {
    if (arg[i] != '{') {
      out.push_back(arg[i++]);
      continue;
    }
    size_t close = arg.find('}', i);
    if (close == std::string::npos) throw AdapterError("unterminated placeholder in argument '" + arg + "'");
    std::string key = arg.substr(i + 1, close - i - 1);
    auto it = values.find(key);
    if (it == values.end()) throw AdapterError("unknown placeholder {" + key + "} in argument '" + arg + "'");
    out += it->second;
    i = close + 1;
  }
  return out;
}

struct ProcessOutcome {
  bool spawned = false;
  bool timed_out = false;
  bool signaled = false;
  int exit_code = -1;
  int signal = 0;
  std::string output;
  std::string error;
};

void kill_group(pid_t pid) { ::killpg(pid, SIGKILL); }

ProcessOutcome run_process(const fs::path& exe, const std::vector<std::string>& args, double timeout_s) {
  ProcessOutcome out;
  std::vector<std::string> storage{exe.string()};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);

  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    out.error = std::string("pipe: ") + std::strerror(errno);
    return out;
  }
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s));
  pid_t pid = ::fork();
  if (pid < 0) {
    out.error = std::string("fork: ") + std::strerror(errno);
    ::close(fds[0]);
    ::close(fds[1]);
    return out;
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, 0);
    ::dup2(fds[1], 1);
    ::dup2(fds[1], 2);
    ::execv(argv[0], argv.data());
    const char msg[] = "exec failed\n";
    ssize_t ignored = ::write(2, msg, sizeof msg - 1);
    (void)ignored;
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fds[1]);
  out.spawned = true;

  char buf[65536];
  bool eof = false;
  while (!eof) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      out.timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 100)));
    if (r < 0 && errno != EINTR) break;
    if (r <= 0) continue;
    ssize_t n = ::read(fds[0], buf, sizeof buf);
    if (n > 0) {
      if (out.output.size() < kMaxCapture) out.output.append(buf, static_cast<size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      eof = true;
    }
  }
  ::close(fds[0]);

  int status = 0;
  for (;;) {
    if (out.timed_out) {
      kill_group(pid);
      ::waitpid(pid, &status, 0);
      break;
    }
    pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline) {
      out.timed_out = true;
      continue;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  // reap anything the planner left running in its group
  kill_group(pid);
  if (!out.timed_out) {
    if (WIFSIGNALED(status)) {
      out.signaled = true;
      out.signal = WTERMSIG(status);
    } else if (WIFEXITED(status)) {
      out.exit_code = WEXITSTATUS(status);
    }
  }
  return out;
}

PlanResult solve_internal(const PlannerAdapter& adapter, const fs::path& domain_file, const fs::path& problem_file,
                          double timeout_s) {
  auto started = Clock::now();
  PlanResult r;
  try {
    auto domain = pddl::parse_domain(util::read_file(domain_file));
    auto problem = pddl::parse_problem(util::read_file(problem_file), domain);
    SearchLimits limits{adapter.max_depth, adapter.max_expansions,
                        started + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s))};
    r = reference_plan(domain, problem, limits);
  } catch (const std::exception& e) {
    r.status = PlanStatus::crashed;
    r.diagnostic = e.what();
  }
  r.wall_time = seconds_since(started);
  return r;
}

}  // namespace

PlanResult solve(const PlannerAdapter& adapter, const fs::path& domain_file, const fs::path& problem_file,
                 std::optional<double> timeout_s) {
  double timeout = timeout_s.value_or(adapter.timeout_s);
  if (adapter.is_internal()) return solve_internal(adapter, domain_file, problem_file, timeout);

  auto exe = resolve_executable(adapter.executable);
  if (!exe) throw ExecutableMissing("planner executable '" + adapter.executable + "' not found or not executable");

  char tmpl[] = "/tmp/pddlforge-plan-XXXXXX";
  if (!::mkdtemp(tmpl)) throw Error(std::string("mkdtemp: ") + std::strerror(errno));
  fs::path scratch(tmpl);
  fs::path output_file = scratch / "plan.out";
  std::map<std::string, std::string> values{{"domain", fs::absolute(domain_file).string()},
                                            {"problem", fs::absolute(problem_file).string()},
                                            {"output", output_file.string()}};
  std::vector<std::string> args;
  try {
    for (const auto& a : adapter.arguments) args.push_back(substitute(a, values));
  } catch (...) {
    fs::remove_all(scratch);
    throw;
  }

  auto started = Clock::now();
  ProcessOutcome proc = run_process(*exe, args, timeout);
  PlanResult r;
  r.wall_time = seconds_since(started);
  r.raw_output = proc.output;

  auto crashed = [&](std::string why) {
    r.status = PlanStatus::crashed;
    r.diagnostic = std::move(why);
  };
  if (!proc.spawned) {
    crashed("spawn failed: " + proc.error);
  } else if (proc.timed_out) {
    r.status = PlanStatus::timeout;
    r.diagnostic = "killed after " + std::to_string(timeout) + " s";
  } else if (proc.signaled) {
    crashed("killed by signal " + std::to_string(proc.signal) + " (" + strsignal(proc.signal) + ")");
  } else if (!adapter.no_solution_pattern.empty() &&
             std::regex_search(proc.output, std::regex(adapter.no_solution_pattern))) {
    r.status = PlanStatus::no_solution;
  } else if (proc.exit_code != 0) {
    crashed("exit status " + std::to_string(proc.exit_code));
  } else {
    std::string text;
    if (adapter.output == OutputMode::standard_output) {
      text = proc.output;
    } else if (fs::exists(output_file)) {
      text = util::read_file(output_file);
    }
    try {
      std::string normalized = normalize_output(adapter.dialect, text, adapter.custom);
      r.plan = validate::parse_plan(normalized);
      r.status = PlanStatus::solved;
    } catch (const Error& e) {
      crashed(std::string("unusable planner output: ") + e.what());
    }
  }
  fs::remove_all(scratch);
  return r;
}

std::string PlanningLogEntry::str() const {
  char t[32];
  std::snprintf(t, sizeof t, "%.6f", wall_time);
  return problem + " " + std::string(to_string(status)) + " " + t + " " +
         (plan_length ? std::to_string(*plan_length) : "-");
}

PlanningLogEntry PlanningLogEntry::parse(const std::string& line) {
  std::istringstream in(line);
  PlanningLogEntry e;
  std::string status, time, length;
  if (!(in >> e.problem >> status >> time >> length)) throw Error("malformed planning.log line '" + line + "'");
  bool known = false;
  for (auto s : {PlanStatus::solved, PlanStatus::timeout, PlanStatus::no_solution, PlanStatus::crashed}) {
    if (to_string(s) == status) {
      e.status = s;
      known = true;
    }
  }
  if (!known) throw Error("unknown status '" + status + "' in planning.log");
  e.wall_time = std::stod(time);
  if (length != "-") e.plan_length = std::stoul(length);
  return e;
}

std::vector<PlanningLogEntry> read_planning_log(const fs::path& path) {
  std::vector<PlanningLogEntry> out;
  if (!fs::exists(path)) return out;
  std::istringstream in(util::read_file(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(PlanningLogEntry::parse(line));
  }
  return out;
}

PlanBatchReport plan_batch(const PlannerAdapter& adapter, const PlanningPaths& session,
                           const BatchPlanOptions& options) {
  auto domain = pddl::parse_domain(util::read_file(session.domain()));
  std::set<std::string> done;
  for (const auto& e : read_planning_log(session.log())) done.insert(e.problem);

  std::vector<fs::path> todo;
  for (const auto& entry : fs::directory_iterator(session.problems())) {
    if (entry.path().extension() != ".pddl") continue;
    if (!done.contains(entry.path().stem().string())) todo.push_back(entry.path());
  }
  std::sort(todo.begin(), todo.end());
  fs::create_directories(session.plans());
  fs::create_directories(session.log().parent_path());

  std::vector<PlanningLogEntry> entries(todo.size());
  std::atomic<size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;

  auto work = [&] {
    for (size_t i = next++; i < todo.size(); i = next++) {
      std::string id = todo[i].stem().string();
      PlanResult r;
      try {
        r = solve(adapter, session.domain(), todo[i], options.timeout_s);
        if (r.status == PlanStatus::solved) {
          auto problem = pddl::parse_problem(util::read_file(todo[i]), domain);
          auto report = validate::validate(domain, problem, *r.plan);
          if (!report.valid) {
            r.status = PlanStatus::crashed;
            r.diagnostic = "plan failed validation: " + report.detail;
            r.plan.reset();
          }
        }
      } catch (const ExecutableMissing&) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        return;
      } catch (const std::exception& e) {
        r.status = PlanStatus::crashed;
        r.diagnostic = e.what();
        r.plan.reset();
      }
      PlanningLogEntry e{id, r.status, std::round(r.wall_time * 1e6) / 1e6, std::nullopt};
      if (r.plan) {
        e.plan_length = r.plan->size();
        util::write_file(session.plans() / (id + ".plan"), r.plan->str());
      }
      std::lock_guard lock(log_mutex);
      util::append_line(session.log(), e.str());
      entries[i] = std::move(e);
    }
  };

  size_t workers = std::max<size_t>(1, std::min(options.workers, todo.size()));
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  PlanBatchReport report;
  std::vector<double> times;
  for (auto& e : entries) {
    switch (e.status) {
      case PlanStatus::solved: ++report.solved; break;
      case PlanStatus::timeout: ++report.timeouts; break;
      case PlanStatus::no_solution: ++report.no_solution; break;
      case PlanStatus::crashed: ++report.crashed; break;
    }
    times.push_back(e.wall_time);
    report.attempted.push_back(std::move(e));
  }
  report.wall_time = summarize(times);
  for (const auto& e : read_planning_log(session.log())) report.shortfall += e.status != PlanStatus::solved;
  return report;
}

}  // namespace pddlforge::planner
