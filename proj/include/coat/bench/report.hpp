#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "coat/training/evaluate.hpp"

namespace coat {

inline constexpr int kResultsFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;
inline constexpr const char* kSummaryId = "summary";

/// One header line "# coat-results version=1", the column line
/// instance_id,tier,solver,solved,plan_length,expansions,elapsed_ms,seed,
/// one row per instance and, per (tier, solver), a summary row with
/// instance_id "summary": solved = solved count, plan_length and expansions
/// = means over solved rows, elapsed_ms = total.
std::string results_csv(const std::vector<EvalRow>& rows);
/// Instance rows only; summary rows are recomputed, not trusted.
std::vector<EvalRow> parse_results_csv(const std::string& text);

struct ReportRow {
  std::string tier;
  std::string solver;
  std::size_t total = 0;
  std::size_t solved = 0;
  double coverage = 0.0;
  double avg_plan_length = 0.0;  // solved only
  double avg_expansions = 0.0;   // solved only
};

/// Groups by (tier, solver), both in order of first appearance.
std::vector<ReportRow> report_rows(const std::vector<EvalRow>& rows);

/// Plain-text tables (coverage, average plan length, average expansions),
/// tiers as rows and solvers as columns. Contains no timing.
std::string report_table(const std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace coat
