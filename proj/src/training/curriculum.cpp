#include "coat/training/curriculum.hpp"

#include <exception>

#include "coat/error.hpp"

namespace coat {

double CurriculumTier::difficulty() const {
  return tier_difficulty(params.domain, params.height, params.width, params.boxes);
}

void CurriculumTier::validate() const {
  params.validate();
  budget.validate();
  if (label.empty()) throw ConfigError("curriculum tier needs a label");
  if (instance_count == 0) throw ConfigError("curriculum tier " + label + " has no instances");
}

std::vector<Instance> generate_tier(const CurriculumTier& tier) {
  tier.validate();
  std::vector<Instance> out(tier.instance_count);
  std::vector<std::exception_ptr> errors(tier.instance_count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < tier.instance_count; ++i) {
    try {
      out[i] = generate_instance(tier.params, tier.seed_base + i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

RoundReport curriculum_round(Model<float>& model, const CurriculumTier& tier, Dataset& dataset,
                             const TrainConfig& config) {
  tier.validate();
  config.validate();
  if (tier.params.domain != dataset.domain())
    throw CurriculumError("tier " + tier.label + " is " + to_string(tier.params.domain) + " but the dataset is " +
                          to_string(dataset.domain()));
  if (!(tier.difficulty() > dataset.max_difficulty()))
    throw CurriculumError("tier " + tier.label + " is not harder than the tiers already in the dataset");

  RoundReport report;
  report.tier = tier.label;
  report.dataset_size_before = dataset.size();

  const auto items = eval_items(generate_tier(tier), tier.label);
  const auto before = evaluate(&model, items, tier.budget, SolverKind::coat);
  report.attempted = items.size();
  report.coverage_before = before.coverage;

  std::vector<PlanRecord> records;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& row = before.rows[i];
    if (!row.solved) continue;
    // evaluate() already rejects plans that do not replay; this is the filter
    const bool valid = visit_instance(items[i].instance, [&](auto tag, const auto& inst) {
      using D = decltype(tag);
      return validate_plan<D>(inst.world, inst.initial, row.actions).valid;
    });
    if (!valid) continue;
    records.push_back({items[i].instance, row.actions, tier.label, tier.difficulty(), items[i].seed});
  }
  report.solved = records.size();
  if (records.empty())
    throw CurriculumError("tier " + tier.label + ": the model solved none of " + std::to_string(items.size()) +
                          " instances within the budget");

  dataset.append(std::move(records));
  report.dataset_size_after = dataset.size();
  report.appended_samples = report.dataset_size_after - report.dataset_size_before;

  report.history = train(model, dataset, config, config.curriculum_learning_rate, config.curriculum_epochs);
  report.coverage_after = evaluate(&model, items, tier.budget, SolverKind::coat).coverage;
  return report;
}

}  // namespace coat
