#include "coat/bench/pipeline.hpp"

#include <cstdio>
#include <exception>
#include <ostream>

#include "coat/bench/checkpoint.hpp"
#include "coat/bench/dataset_io.hpp"
#include "coat/bench/io.hpp"
#include "coat/bench/report.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coat {

namespace fs = std::filesystem;

std::string tier_label(int height, int width, int quarter_turns) {
  std::string s = std::to_string(height) + "x" + std::to_string(width);
  if (quarter_turns) s += "-r" + std::to_string(90 * quarter_turns);
  return s;
}

GeneratorParams tier_params(const ExperimentConfig& config, int size) {
  auto p = config.data;
  p.height = size;
  p.width = size;
  return p;
}

namespace {

std::vector<Instance> generate_many(const GeneratorParams& params, std::size_t count, std::uint64_t seed0) {
  std::vector<Instance> out(count);
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      out[i] = generate_instance(params, seed0 + i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<EvalItem> eval_tier(const ExperimentConfig& config, int size, int quarter_turns) {
  auto instances = generate_many(tier_params(config, size), config.eval_instances, config.eval_seed);
  for (auto& inst : instances) inst = rotate_instance(inst, quarter_turns);
  return eval_items(instances, tier_label(size, size, quarter_turns));
}

std::vector<Instance> training_instances(const ExperimentConfig& config) {
  return generate_many(config.data, config.data_instances, config.data_seed);
}

std::string history_text(const TrainHistory& h) {
  std::string out = "# coat-history version=1\ninitial_loss=" + fixed(h.initial_loss, 6) + "\nepoch,steps,train_loss,train_mae,validation_loss,validation_mae\n";
  for (const auto& e : h.epochs)
    out += std::to_string(e.epoch) + "," + std::to_string(e.steps) + "," + fixed(e.train_loss, 6) + "," +
           fixed(e.train_mae, 6) + "," + fixed(e.validation_loss, 6) + "," + fixed(e.validation_mae, 6) + "\n";
  return out;
}

PipelineResult run_pipeline(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
  auto say = [&](const std::string& line) {
    if (log) *log << line << std::endl;
  };
  const fs::path out = config.out_dir;
  atomic_write(out / "config.txt", serialize_config(config));

  const auto train_instances = training_instances(config);
  const std::string train_tier = tier_label(config.data.height, config.data.width);
  for (std::size_t i = 0; i < train_instances.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%05zu.txt", i);
    atomic_write(out / "instances" / "train" / name, serialize_instance(train_instances[i]));
  }
  say("generated " + std::to_string(train_instances.size()) + " training instances (" + train_tier + ")");

  PlanFile plans{config.domain, oracle_records(train_instances, train_tier)};
  write_plans(out / "plans.jsonl", plans);
  Dataset data = build_dataset(config.domain, plans.records, DatasetOptions{true, config.validation_fraction});
  say("dataset: " + std::to_string(data.size()) + " samples, " + std::to_string(data.validation_indices().size()) +
      " held out");

  PipelineResult result;
  auto model = build_model<float>(config.model_config(), config.seed);
  result.history = train(model, data, config.train);
  save_checkpoint(out / "model", model, {{"domain", to_string(config.domain)}, {"seed", std::to_string(config.seed)}});
  atomic_write(out / "history.txt", history_text(result.history));
  if (!result.history.epochs.empty())
    say("trained " + std::to_string(result.history.steps) + " steps, final train loss " +
        fixed(result.history.epochs.back().train_loss, 4));

  auto evaluate_all = [&](const Model<float>& m, bool curriculum) {
    for (int size : config.eval_sizes)
      for (int q : config.eval_rotations) {
        const auto items = eval_tier(config, size, q);
        for (const auto& name : config.eval_solvers) {
          const auto kind = parse_solver_kind(name);
          if (curriculum && kind != SolverKind::coat) continue;
          auto summary = evaluate(&m, items, config.budget, kind);
          if (curriculum)
            for (auto& r : summary.rows) r.solver = "coat-curr";
          say(items.front().tier + " " + (curriculum ? "coat-curr" : name) + ": coverage " +
              fixed(summary.coverage, 2));
          result.rows.insert(result.rows.end(), summary.rows.begin(), summary.rows.end());
        }
      }
  };
  evaluate_all(model, false);

  if (!config.curriculum_sizes.empty()) {
    for (std::size_t k = 0; k < config.curriculum_sizes.size(); ++k) {
      const int size = config.curriculum_sizes[k];
      CurriculumTier tier{tier_label(size, size), tier_params(config, size), config.curriculum_instances,
                          config.curriculum_seed + 100000 * k, config.curriculum_budget};
      auto round = curriculum_round(model, tier, data, config.train);
      say("curriculum " + tier.label + ": solved " + std::to_string(round.solved) + "/" +
          std::to_string(round.attempted) + ", dataset " + std::to_string(round.dataset_size_after));
      result.rounds.push_back(std::move(round));
    }
    save_checkpoint(out / "model-curriculum", model,
                    {{"domain", to_string(config.domain)}, {"seed", std::to_string(config.seed)}});
    evaluate_all(model, true);
  }

  atomic_write(out / "results.csv", results_csv(result.rows));
  const auto rows = report_rows(result.rows);
  atomic_write(out / "report.txt", report_table(rows));
  atomic_write(out / "report.csv", report_csv(rows));
  say("wrote " + (out / "report.txt").string());
  return result;
}

}  // namespace coat
