#pragma once

#include <filesystem>
#include <string>

#include "pddlforge/pddl/ast.hpp"

namespace testing {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& text);

fs::path data_path(const std::string& relative);
fs::path fixture_path(const std::string& relative);
fs::path cli_path();

const pddlforge::pddl::Domain& artic3_domain();
const pddlforge::pddl::Domain& macro_domain();
pddlforge::pddl::Problem artic3_micro();
pddlforge::pddl::Problem artic3_sample();

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& child) const { return path_ / child; }

 private:
  fs::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

/// Runs through /bin/sh, capturing stdout and stderr.
CommandResult run_command(const std::string& command);

/// Writes an executable shell script.
void write_script(const fs::path& path, const std::string& body);

}  // namespace testing
