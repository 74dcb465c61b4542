#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coat/domains/instance.hpp"

namespace coat {

/// Writes `path.tmp` and renames it over `path`, so readers never see a
/// half-written file. Parent directories are created.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// Flat "key=value" lines; blank lines and lines starting with '#' are
/// skipped. Duplicate keys and lines without '=' are IoErrors.
std::map<std::string, std::string> parse_key_values(std::string_view text, const std::string& what);

/// Comma-separated action names.
std::string format_plan(const Instance& instance, const std::vector<int>& actions);
std::vector<int> parse_plan(const Instance& instance, std::string_view text);

/// Instance files (*.txt) of a directory in name order, or the single file.
std::vector<std::filesystem::path> instance_files(const std::filesystem::path& path);

struct LoadedInstance {
  std::string id;  // file stem
  Instance instance;
};
std::vector<LoadedInstance> load_instances(const std::filesystem::path& path);

}  // namespace coat
