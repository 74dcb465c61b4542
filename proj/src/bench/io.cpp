#include "coat/bench/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "coat/error.hpp"

namespace coat {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> parse_key_values(std::string_view text, const std::string& what) {
  std::map<std::string, std::string> out;
  std::size_t number = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw IoError(what + " line " + std::to_string(number) + ": expected key=value");
    auto trim = [](std::string_view s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string_view::npos) return std::string();
      const auto b = s.find_last_not_of(" \t");
      return std::string(s.substr(a, b - a + 1));
    };
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw IoError(what + " line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second)
      throw IoError(what + " line " + std::to_string(number) + ": duplicate key " + key);
  }
  return out;
}

std::string format_plan(const Instance& instance, const std::vector<int>& actions) {
  return visit_instance(instance, [&](auto tag, const auto&) {
    using D = decltype(tag);
    std::string out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (i) out += ',';
      out += D::action_name(actions[i]);
    }
    return out;
  });
}

std::vector<int> parse_plan(const Instance& instance, std::string_view text) {
  return visit_instance(instance, [&](auto tag, const auto&) {
    using D = decltype(tag);
    std::vector<int> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      const auto name = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      const auto a = D::parse_action(name);
      if (!a) throw IoError("unknown " + to_string(domain_of(instance)) + " action '" + std::string(name) + "'");
      out.push_back(*a);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  });
}

std::vector<fs::path> instance_files(const fs::path& path) {
  if (!fs::exists(path)) throw IoError(path.string() + " does not exist");
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no instance files (*.txt) in " + path.string());
  return files;
}

std::vector<LoadedInstance> load_instances(const fs::path& path) {
  std::vector<LoadedInstance> out;
  for (const auto& f : instance_files(path)) {
    try {
      out.push_back({f.stem().string(), parse_instance(read_file(f))});
    } catch (const ParseError& e) {
      throw IoError(f.string() + ": " + e.what());
    }
  }
  return out;
}

}  // namespace coat
