#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pddlforge::util {

namespace fs = std::filesystem;

/// Throws pddlforge::Error if the file cannot be read.
std::string read_file(const fs::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file(const fs::path& path, std::string_view text);

/// Appends `line` plus a newline and flushes to disk before returning.
void append_line(const fs::path& path, std::string_view line);

}  // namespace pddlforge::util
