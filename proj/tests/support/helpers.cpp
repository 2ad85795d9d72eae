#include "support/helpers.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pddlforge/pddl/parser.hpp"

namespace testing {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

fs::path data_path(const std::string& relative) { return fs::path(PDDLFORGE_DATA_DIR) / relative; }
fs::path fixture_path(const std::string& relative) { return fs::path(PDDLFORGE_FIXTURE_DIR) / relative; }
fs::path cli_path() { return fs::path(PDDLFORGE_CLI); }

const pddlforge::pddl::Domain& artic3_domain() {
  static const auto d = pddlforge::pddl::parse_domain(read_file(data_path("artic3/domain.pddl")));
  return d;
}

const pddlforge::pddl::Domain& macro_domain() {
  static const auto d = pddlforge::pddl::parse_domain(read_file(data_path("artic3-macro/domain.pddl")));
  return d;
}

pddlforge::pddl::Problem artic3_micro() {
  return pddlforge::pddl::parse_problem(read_file(data_path("artic3/micro.pddl")), artic3_domain());
}

pddlforge::pddl::Problem artic3_sample() {
  return pddlforge::pddl::parse_problem(read_file(data_path("artic3/sample.pddl")), artic3_domain());
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "pddlforge-test-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

CommandResult run_command(const std::string& command) {
  CommandResult r;
  std::string full = command + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write_script(const fs::path& path, const std::string& body) {
  write_file(path, "#!/bin/sh\n" + body);
  fs::permissions(path, fs::perms::owner_all | fs::perms::group_read | fs::perms::group_exec,
                  fs::perm_options::replace);
}

}  // namespace testing
