#pragma once

#include <string>
#include <vector>

#include "coat/domains/generate.hpp"
#include "coat/training/evaluate.hpp"
#include "coat/training/trainer.hpp"

namespace coat {

struct CurriculumTier {
  std::string label;
  GeneratorParams params;
  std::size_t instance_count = 50;
  std::uint64_t seed_base = 0;
  SearchBudget budget;

  double difficulty() const;
  void validate() const;
};

struct RoundReport {
  std::string tier;
  std::size_t attempted = 0;
  std::size_t solved = 0;
  std::size_t appended_samples = 0;
  std::size_t dataset_size_before = 0;
  std::size_t dataset_size_after = 0;
  /// On the tier's own instances, with the incoming and the fine-tuned model.
  double coverage_before = 0.0;
  double coverage_after = 0.0;
  TrainHistory history;
};

/// Generates tier.instance_count certified instances with seeds
/// seed_base, seed_base + 1, ... (in parallel, kept in seed order).
std::vector<Instance> generate_tier(const CurriculumTier& tier);

/// Solves the tier with the current model, appends the validated plans and
/// fine-tunes at the curriculum learning rate. Throws CurriculumError, with
/// the dataset untouched, when nothing is solved.
RoundReport curriculum_round(Model<float>& model, const CurriculumTier& tier, Dataset& dataset,
                             const TrainConfig& config);

}  // namespace coat
