#include "coat/bench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "coat/error.hpp"

namespace coat {

namespace {

const char* kColumns = "instance_id,tier,solver,solved,plan_length,expansions,elapsed_ms,seed";

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\"") != std::string::npos) throw ContractError("CSV field '" + s + "' needs quoting");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string results_csv(const std::vector<EvalRow>& rows) {
  std::string out = "# coat-results version=" + std::to_string(kResultsFormatVersion) + "\n" + kColumns + "\n";
  for (const auto& r : rows) {
    check_field(r.instance_id);
    check_field(r.tier);
    check_field(r.solver);
    if (r.instance_id == kSummaryId) throw ContractError("instance id 'summary' is reserved");
    out += r.instance_id + "," + r.tier + "," + r.solver + "," + (r.solved ? "1" : "0") + "," +
           std::to_string(r.plan_length) + "," + std::to_string(r.expansions) + "," + fixed(r.elapsed_ms, 3) + "," +
           std::to_string(r.seed) + "\n";
  }
  for (const auto& g : report_rows(rows)) {
    double elapsed = 0;
    for (const auto& r : rows)
      if (r.tier == g.tier && r.solver == g.solver) elapsed += r.elapsed_ms;
    out += std::string(kSummaryId) + "," + g.tier + "," + g.solver + "," + std::to_string(g.solved) + "," +
           fixed(g.avg_plan_length, 3) + "," + fixed(g.avg_expansions, 1) + "," + fixed(elapsed, 3) + ",\n";
  }
  return out;
}

std::vector<EvalRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& what) { return IoError("results line " + std::to_string(number) + ": " + what); };
  std::vector<EvalRow> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1) {
      if (line != "# coat-results version=" + std::to_string(kResultsFormatVersion)) {
        if (line.starts_with("# coat-results")) throw fail("unsupported version");
        throw fail("not a results file");
      }
      continue;
    }
    if (number == 2) {
      if (line != kColumns) throw fail("unexpected columns");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw fail("expected 8 fields, got " + std::to_string(f.size()));
    if (f[0] == kSummaryId) continue;
    EvalRow r;
    try {
      r.instance_id = f[0];
      r.tier = f[1];
      r.solver = f[2];
      if (f[3] != "0" && f[3] != "1") throw fail("solved must be 0 or 1");
      r.solved = f[3] == "1";
      r.plan_length = std::stoul(f[4]);
      r.expansions = std::stoul(f[5]);
      r.elapsed_ms = std::stod(f[6]);
      r.seed = std::stoull(f[7]);
    } catch (const std::logic_error&) {
      throw fail("malformed number");
    }
    r.outcome = r.solved ? SearchOutcome::solved : SearchOutcome::exhausted;
    rows.push_back(std::move(r));
  }
  if (number < 2) throw IoError("results file is truncated");
  return rows;
}

std::vector<ReportRow> report_rows(const std::vector<EvalRow>& rows) {
  std::vector<ReportRow> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace({r.tier, r.solver}, out.size());
    if (fresh) out.push_back({r.tier, r.solver});
    auto& g = out[it->second];
    ++g.total;
    if (r.solved) {
      ++g.solved;
      g.avg_plan_length += static_cast<double>(r.plan_length);
      g.avg_expansions += static_cast<double>(r.expansions);
    }
  }
  for (auto& g : out) {
    g.coverage = static_cast<double>(g.solved) / static_cast<double>(g.total);
    if (g.solved) {
      g.avg_plan_length /= static_cast<double>(g.solved);
      g.avg_expansions /= static_cast<double>(g.solved);
    }
  }
  return out;
}

std::string report_table(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw UsageError("report: no result rows");
  std::vector<std::string> tiers, solvers;
  auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : rows) {
    add(tiers, r.tier);
    add(solvers, r.solver);
  }
  auto find = [&](const std::string& t, const std::string& s) -> const ReportRow* {
    for (const auto& r : rows)
      if (r.tier == t && r.solver == s) return &r;
    return nullptr;
  };

  std::string out = "# coat-report version=" + std::to_string(kReportFormatVersion) + "\n";
  auto table = [&](const std::string& title, auto cell) {
    std::vector<std::vector<std::string>> grid;
    grid.push_back({"tier"});
    for (const auto& s : solvers) grid[0].push_back(s);
    for (const auto& t : tiers) {
      std::vector<std::string> line{t};
      for (const auto& s : solvers) {
        const auto* r = find(t, s);
        line.push_back(r ? cell(*r) : "-");
      }
      grid.push_back(std::move(line));
    }
    std::vector<std::size_t> width(grid[0].size(), 0);
    for (const auto& line : grid)
      for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    out += "\n" + title + "\n";
    for (const auto& line : grid) {
      std::string text;
      for (std::size_t c = 0; c < line.size(); ++c) {
        if (c == 0) text += line[c] + std::string(width[c] - line[c].size(), ' ');
        else text += "  " + std::string(width[c] - line[c].size(), ' ') + line[c];
      }
      out += text + "\n";
    }
  };
  table("coverage (solved/total)", [](const ReportRow& r) {
    return fixed(r.coverage, 2) + " (" + std::to_string(r.solved) + "/" + std::to_string(r.total) + ")";
  });
  table("average plan length (solved only)",
        [](const ReportRow& r) { return r.solved ? fixed(r.avg_plan_length, 2) : std::string("-"); });
  table("average expansions (solved only)",
        [](const ReportRow& r) { return r.solved ? fixed(r.avg_expansions, 1) : std::string("-"); });
  return out;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw UsageError("report: no result rows");
  std::string out = "# coat-report version=" + std::to_string(kReportFormatVersion) +
                    "\ntier,solver,total,solved,coverage,avg_plan_length,avg_expansions\n";
  for (const auto& r : rows)
    out += r.tier + "," + r.solver + "," + std::to_string(r.total) + "," + std::to_string(r.solved) + "," +
           fixed(r.coverage, 4) + "," + fixed(r.avg_plan_length, 3) + "," + fixed(r.avg_expansions, 1) + "\n";
  return out;
}

}  // namespace coat
