#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "coat/training/dataset.hpp"

namespace coat {

inline constexpr int kDatasetFormatVersion = 1;

struct PlanFile {
  DomainTag domain = DomainTag::maze;
  std::vector<PlanRecord> records;
};

/// JSON lines: a header object {"format":"coat-plans","version":1,...}, then
/// one object per record with the instance text, the comma-separated plan and
/// its provenance.
std::string serialize_plans(const PlanFile& plans);
PlanFile parse_plans(const std::string& text);

void write_plans(const std::filesystem::path& path, const PlanFile& plans);
PlanFile read_plans(const std::filesystem::path& path);

}  // namespace coat
