#include "coat/bench/dataset_io.hpp"

#include <json.hpp>
#include <sstream>

#include "coat/bench/io.hpp"
#include "coat/error.hpp"

namespace coat {

using json = nlohmann::ordered_json;

std::string serialize_plans(const PlanFile& plans) {
  std::string out = json{{"format", "coat-plans"},
                         {"version", kDatasetFormatVersion},
                         {"domain", to_string(plans.domain)},
                         {"records", plans.records.size()}}
                        .dump() +
                    "\n";
  for (const auto& r : plans.records) {
    if (domain_of(r.instance) != plans.domain) throw ContractError("plan file mixes domains");
    out += json{{"instance", serialize_instance(r.instance)},
                {"plan", format_plan(r.instance, r.actions)},
                {"tier", r.tier},
                {"difficulty", r.difficulty},
                {"seed", r.seed}}
               .dump();
    out += '\n';
  }
  return out;
}

PlanFile parse_plans(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& what) -> IoError {
    return IoError("plan file line " + std::to_string(number) + ": " + what);
  };
  PlanFile out;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw fail(e.what());
    }
    try {
      if (number == 1) {
        if (j.value("format", "") != "coat-plans") throw fail("not a plan file");
        if (j.at("version").get<int>() != kDatasetFormatVersion)
          throw fail("unsupported version " + j.at("version").dump());
        out.domain = parse_domain_tag(j.at("domain").get<std::string>());
        expected = j.at("records").get<std::size_t>();
        continue;
      }
      PlanRecord r;
      r.instance = parse_instance(j.at("instance").get<std::string>());
      if (domain_of(r.instance) != out.domain) throw fail("record domain differs from the header");
      r.actions = parse_plan(r.instance, j.at("plan").get<std::string>());
      r.tier = j.at("tier").get<std::string>();
      r.difficulty = j.at("difficulty").get<double>();
      r.seed = j.at("seed").get<std::uint64_t>();
      out.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw fail(e.what());
    } catch (const ParseError& e) {
      throw fail(std::string("instance: ") + e.what());
    }
  }
  if (number == 0) throw IoError("empty plan file");
  if (out.records.size() != expected)
    throw IoError("plan file announces " + std::to_string(expected) + " records but holds " +
                  std::to_string(out.records.size()));
  return out;
}

void write_plans(const std::filesystem::path& path, const PlanFile& plans) { atomic_write(path, serialize_plans(plans)); }

PlanFile read_plans(const std::filesystem::path& path) { return parse_plans(read_file(path)); }

}  // namespace coat
