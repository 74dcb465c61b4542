#pragma once

#include <filesystem>
#include <vector>

#include "coat/bench/config.hpp"
#include "coat/training/curriculum.hpp"

namespace coat {

/// Eval tier label: "<h>x<w>", plus "-r90" etc. for rotated copies.
std::string tier_label(int height, int width, int quarter_turns = 0);

/// Generator params of a square evaluation / curriculum tier.
GeneratorParams tier_params(const ExperimentConfig& config, int size);

/// Held-out items for one size and rotation; seeds eval_seed + i.
std::vector<EvalItem> eval_tier(const ExperimentConfig& config, int size, int quarter_turns);

/// Generates the training instances in parallel, in seed order.
std::vector<Instance> training_instances(const ExperimentConfig& config);

struct PipelineResult {
  std::vector<EvalRow> rows;
  std::vector<RoundReport> rounds;
  TrainHistory history;
};

/// generate -> oracle -> dataset -> train -> evaluate (-> curriculum ->
/// evaluate again as solver "coat-curr"), writing into config.out_dir:
/// config.txt, instances/train/*.txt, plans.jsonl, model/, history.txt,
/// results.csv, report.txt, report.csv. `log` receives progress lines.
PipelineResult run_pipeline(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Per-epoch losses, fixed precision; no timing.
std::string history_text(const TrainHistory& history);

}  // namespace coat
