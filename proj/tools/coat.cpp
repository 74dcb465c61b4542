// coat: command-line front end for the planning pipeline.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "coat/bench/checkpoint.hpp"
#include "coat/bench/dataset_io.hpp"
#include "coat/bench/io.hpp"
#include "coat/bench/pddl.hpp"
#include "coat/bench/pipeline.hpp"
#include "coat/bench/report.hpp"
#include "coat/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace coat;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_file;
  int threads = -1;
};

ExperimentConfig load_config(const Common& common) {
  ExperimentConfig c;
  if (!common.config_file.empty()) c = parse_config(read_file(common.config_file));
  apply_environment(c);
  if (common.threads >= 0) c.threads = common.threads;
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
  return c;
}

fs::path default_out(const ExperimentConfig& c, const std::string& out, const std::string& name) {
  return out.empty() ? fs::path(c.out_dir) / name : fs::path(out);
}

void print_summary(const EvalSummary& s, const std::string& tier, const std::string& solver) {
  std::printf("%s %s: solved %zu/%zu (coverage %.2f), avg length %.2f, avg expansions %.1f\n", tier.c_str(),
              solver.c_str(), s.solved, s.total, s.coverage, s.avg_plan_length, s.avg_expansions);
}

std::string size_label(const Instance& inst) {
  return std::visit([](const auto& i) { return tier_label(i.world.geometry.height, i.world.geometry.width); }, inst);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CoAt heuristic learning for grid planning domains"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_file, "flat key=value experiment config");
  app.add_option("--threads", common.threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "write oracle-certified instances");
  std::string gen_domain = "maze", gen_out;
  int gen_size = 0, gen_height = 0, gen_width = 0, gen_boxes = -1, gen_pairs = -1;
  std::size_t gen_count = 1;
  std::uint64_t gen_seed = 1;
  gen->add_option("--domain", gen_domain, "sokoban | maze | floortile")->required();
  gen->add_option("--size", gen_size, "square grid size");
  gen->add_option("--height", gen_height);
  gen->add_option("--width", gen_width);
  gen->add_option("--count", gen_count)->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "seed of the first instance; instance i uses seed + i");
  gen->add_option("--boxes", gen_boxes);
  gen->add_option("--pairs", gen_pairs, "maze teleport pairs");
  gen->add_option("--out", gen_out, "output directory");

  // oracle
  auto* orc = app.add_subcommand("oracle", "solve instances optimally and write a plan file");
  std::string orc_in, orc_out, orc_tier;
  orc->add_option("--in", orc_in, "instance file or directory")->required();
  orc->add_option("--out", orc_out, "plan file (.jsonl)");
  orc->add_option("--tier", orc_tier, "provenance label (default: grid size)");

  // dataset
  auto* dset = app.add_subcommand("dataset", "merge and validate plan files into a training set");
  std::vector<std::string> dset_plans;
  std::string dset_out;
  double dset_validation = 0.1;
  bool dset_no_goal = false;
  dset->add_option("--plans", dset_plans, "plan files")->required();
  dset->add_option("--out", dset_out, "merged plan file");
  dset->add_option("--validation-fraction", dset_validation)->check(CLI::Range(0.0, 0.99));
  dset->add_flag("--no-goal-samples", dset_no_goal);

  // train
  auto* trn = app.add_subcommand("train", "train a CoAt model on a plan file");
  std::string trn_data, trn_out, trn_init, trn_head, trn_preset;
  std::optional<std::uint64_t> trn_seed;
  std::optional<std::size_t> trn_epochs, trn_batch, trn_steps;
  std::optional<double> trn_lr, trn_policy;
  trn->add_option("--data", trn_data, "plan file")->required();
  trn->add_option("--out", trn_out, "checkpoint directory");
  trn->add_option("--init", trn_init, "start from this checkpoint");
  trn->add_option("--seed", trn_seed);
  trn->add_option("--epochs", trn_epochs);
  trn->add_option("--batch-size", trn_batch);
  trn->add_option("--max-steps", trn_steps);
  trn->add_option("--lr", trn_lr);
  trn->add_option("--policy-weight", trn_policy);
  trn->add_option("--head", trn_head, "dual | single");
  trn->add_option("--preset", trn_preset, "desk | paper");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "run A* over instances and write per-instance CSV");
  std::string ev_model, ev_in, ev_out, ev_tier;
  std::vector<std::string> ev_solvers{"coat"};
  std::optional<std::size_t> ev_expansions;
  std::optional<double> ev_seconds;
  int ev_rotate = 0;
  ev->add_option("--model", ev_model, "checkpoint directory (coat solver)");
  ev->add_option("--in", ev_in, "instance file or directory")->required();
  ev->add_option("--solver", ev_solvers, "coat | blind | oracle (repeatable)");
  ev->add_option("--tier", ev_tier, "tier label (default: grid size)");
  ev->add_option("--max-expansions", ev_expansions);
  ev->add_option("--max-seconds", ev_seconds);
  ev->add_option("--rotate", ev_rotate, "quarter turns applied first")->check(CLI::Range(0, 3));
  ev->add_option("--out", ev_out, "results CSV");

  // curriculum
  auto* cur = app.add_subcommand("curriculum", "one self-solving round at a harder tier");
  std::string cur_model, cur_data, cur_out_model, cur_out_data;
  int cur_size = 0, cur_boxes = -1, cur_pairs = -1;
  std::size_t cur_count = 50;
  std::uint64_t cur_seed = 50000;
  std::optional<std::size_t> cur_expansions, cur_epochs;
  std::optional<double> cur_lr;
  cur->add_option("--model", cur_model)->required();
  cur->add_option("--data", cur_data, "plan file the model was trained on")->required();
  cur->add_option("--size", cur_size, "square tier size")->required();
  cur->add_option("--boxes", cur_boxes);
  cur->add_option("--pairs", cur_pairs);
  cur->add_option("--count", cur_count)->check(CLI::PositiveNumber);
  cur->add_option("--seed", cur_seed);
  cur->add_option("--max-expansions", cur_expansions);
  cur->add_option("--epochs", cur_epochs);
  cur->add_option("--lr", cur_lr);
  cur->add_option("--out-model", cur_out_model)->required();
  cur->add_option("--out-data", cur_out_data)->required();

  // export-pddl
  auto* pddl = app.add_subcommand("export-pddl", "write a PDDL domain and problem for an instance");
  std::string pddl_in, pddl_out;
  pddl->add_option("--in", pddl_in, "instance file")->required();
  pddl->add_option("--out", pddl_out, "directory for domain.pddl and problem.pddl (default: stdout)");

  // report
  auto* rep = app.add_subcommand("report", "aggregate results CSVs into tables");
  std::vector<std::string> rep_in;
  std::string rep_out;
  rep->add_option("--in", rep_in, "results CSV files")->required();
  rep->add_option("--out", rep_out, "directory for report.txt and report.csv");

  // inspect
  auto* ins = app.add_subcommand("inspect", "describe an artifact");
  std::string ins_path;
  ins->add_option("path", ins_path)->required();

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "generate, solve, train, evaluate and report from a config");
  std::string pipe_preset;
  pipe->add_option("--preset", pipe_preset, "desk preset domain used as the base config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto config = load_config(common);

    if (*gen) {
      const auto tag = parse_domain_tag(gen_domain);
      const int h = gen_height ? gen_height : gen_size, w = gen_width ? gen_width : gen_size;
      if (h <= 0 || w <= 0) throw UsageError("generate: give --size or --height and --width");
      auto params = GeneratorParams::for_domain(tag, h, w);
      if (gen_boxes >= 0) params.boxes = gen_boxes;
      if (gen_pairs >= 0) params.teleport_pairs = gen_pairs;
      params.validate();
      ExperimentConfig c = config;
      c.data = params;
      c.domain = tag;
      c.data_instances = gen_count;
      c.data_seed = gen_seed;
      const auto instances = training_instances(c);
      const auto dir = default_out(config, gen_out, "instances");
      for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto name = to_string(tag) + "-" + tier_label(h, w) + "-s" + std::to_string(gen_seed + i) + ".txt";
        atomic_write(dir / name, serialize_instance(instances[i]));
      }
      std::printf("wrote %zu instances to %s\n", instances.size(), dir.string().c_str());
    } else if (*orc) {
      const auto loaded = load_instances(orc_in);
      std::vector<Instance> instances;
      for (const auto& l : loaded) instances.push_back(l.instance);
      const auto domain = domain_of(instances.front());
      for (const auto& i : instances)
        if (domain_of(i) != domain) throw UsageError("oracle: instances mix domains");
      PlanFile plans{domain, oracle_records(instances, orc_tier.empty() ? size_label(instances.front()) : orc_tier)};
      std::size_t total = 0;
      for (const auto& r : plans.records) total += r.actions.size();
      const auto path = default_out(config, orc_out, "plans.jsonl");
      write_plans(path, plans);
      std::printf("solved %zu instances, total plan length %zu -> %s\n", plans.records.size(), total,
                  path.string().c_str());
    } else if (*dset) {
      PlanFile merged;
      for (std::size_t i = 0; i < dset_plans.size(); ++i) {
        auto part = read_plans(dset_plans[i]);
        if (i == 0) merged.domain = part.domain;
        if (part.domain != merged.domain) throw UsageError("dataset: plan files mix domains");
        for (auto& r : part.records) merged.records.push_back(std::move(r));
      }
      const Dataset d = build_dataset(merged.domain, merged.records, DatasetOptions{!dset_no_goal, dset_validation});
      const auto path = default_out(config, dset_out, "dataset.jsonl");
      write_plans(path, merged);
      std::printf("%zu records, %zu samples (%zu train, %zu validation) -> %s\n", d.records().size(), d.size(),
                  d.train_indices().size(), d.validation_indices().size(), path.string().c_str());
    } else if (*trn) {
      const auto plans = read_plans(trn_data);
      ExperimentConfig c = config;
      c.domain = plans.domain;
      if (!trn_head.empty()) c.head = parse_head_mode(trn_head);
      if (!trn_preset.empty()) {
        if (trn_preset != "desk" && trn_preset != "paper") throw UsageError("--preset is desk or paper");
        c.paper_model = trn_preset == "paper";
      }
      if (trn_seed) c.train.seed = *trn_seed;
      if (trn_epochs) c.train.epochs = *trn_epochs;
      if (trn_batch) c.train.batch_size = *trn_batch;
      if (trn_steps) c.train.max_steps = *trn_steps;
      if (trn_lr) c.train.learning_rate = *trn_lr;
      if (trn_policy) c.train.policy_weight = *trn_policy;
      const Dataset d = build_dataset(plans.domain, plans.records, DatasetOptions{true, c.validation_fraction});
      Model<float> model = trn_init.empty() ? build_model<float>(c.model_config(), c.train.seed)
                                            : load_checkpoint(trn_init).model;
      const auto history = train(model, d, c.train);
      const auto dir = default_out(config, trn_out, "model");
      save_checkpoint(dir, model, {{"domain", to_string(plans.domain)}, {"seed", std::to_string(c.train.seed)}});
      atomic_write(dir / "history.txt", history_text(history));
      std::printf("trained %zu steps: loss %.4f -> %.4f -> %s\n", history.steps, history.initial_loss,
                  history.epochs.empty() ? history.initial_loss : history.epochs.back().train_loss,
                  dir.string().c_str());
    } else if (*ev) {
      auto loaded = load_instances(ev_in);
      SearchBudget budget = config.budget;
      if (ev_expansions) budget.max_expansions = *ev_expansions;
      if (ev_seconds) budget.max_seconds = *ev_seconds;
      std::optional<Checkpoint> ckpt;
      if (!ev_model.empty()) ckpt = load_checkpoint(ev_model);
      std::vector<EvalItem> items;
      for (const auto& l : loaded) {
        auto inst = rotate_instance(l.instance, ev_rotate);
        const auto& fields = meta_of(inst).fields;
        const auto seed = fields.find("seed");
        const std::string tier = ev_tier.empty() ? size_label(l.instance) + (ev_rotate ? "-r" + std::to_string(90 * ev_rotate) : "") : ev_tier;
        items.push_back({std::move(inst), l.id, tier, seed == fields.end() ? 0 : std::stoull(seed->second)});
      }
      std::vector<EvalRow> rows;
      for (const auto& name : ev_solvers) {
        const auto kind = parse_solver_kind(name);
        if (kind == SolverKind::coat && !ckpt) throw UsageError("evaluate: the coat solver needs --model");
        if (ckpt) check_compatible(ckpt->model.config(), Dataset(domain_of(items.front().instance)));
        const auto s = evaluate(ckpt ? &ckpt->model : nullptr, items, budget, kind);
        print_summary(s, items.front().tier, name);
        rows.insert(rows.end(), s.rows.begin(), s.rows.end());
      }
      const auto path = default_out(config, ev_out, "results.csv");
      atomic_write(path, results_csv(rows));
      std::printf("-> %s\n", path.string().c_str());
    } else if (*cur) {
      auto ckpt = load_checkpoint(cur_model);
      const auto plans = read_plans(cur_data);
      Dataset d = build_dataset(plans.domain, plans.records, DatasetOptions{true, config.validation_fraction});
      CurriculumTier tier;
      tier.label = tier_label(cur_size, cur_size);
      tier.params = GeneratorParams::for_domain(plans.domain, cur_size, cur_size);
      if (cur_boxes >= 0) tier.params.boxes = cur_boxes;
      if (cur_pairs >= 0) tier.params.teleport_pairs = cur_pairs;
      tier.instance_count = cur_count;
      tier.seed_base = cur_seed;
      tier.budget = config.curriculum_budget;
      if (cur_expansions) tier.budget.max_expansions = *cur_expansions;
      TrainConfig tc = config.train;
      if (cur_epochs) tc.curriculum_epochs = *cur_epochs;
      if (cur_lr) tc.curriculum_learning_rate = *cur_lr;
      const auto report = curriculum_round(ckpt.model, tier, d, tc);
      PlanFile out{plans.domain, d.records()};
      write_plans(cur_out_data, out);
      save_checkpoint(cur_out_model, ckpt.model, ckpt.info);
      atomic_write(fs::path(cur_out_model) / "history.txt", history_text(report.history));
      std::printf("%s: solved %zu/%zu, coverage %.2f -> %.2f, dataset %zu -> %zu samples\n", tier.label.c_str(),
                  report.solved, report.attempted, report.coverage_before, report.coverage_after,
                  report.dataset_size_before, report.dataset_size_after);
    } else if (*pddl) {
      const auto inst = parse_instance(read_file(pddl_in));
      const auto out = export_pddl(inst);
      if (pddl_out.empty()) {
        std::cout << out.domain << "\n" << out.problem;
      } else {
        atomic_write(fs::path(pddl_out) / "domain.pddl", out.domain);
        atomic_write(fs::path(pddl_out) / "problem.pddl", out.problem);
        std::printf("-> %s\n", pddl_out.c_str());
      }
    } else if (*rep) {
      std::vector<EvalRow> rows;
      for (const auto& f : rep_in) {
        auto part = parse_results_csv(read_file(f));
        rows.insert(rows.end(), part.begin(), part.end());
      }
      const auto grouped = report_rows(rows);
      const auto table = report_table(grouped);
      if (!rep_out.empty()) {
        atomic_write(fs::path(rep_out) / "report.txt", table);
        atomic_write(fs::path(rep_out) / "report.csv", report_csv(grouped));
      }
      std::cout << table;
    } else if (*ins) {
      const fs::path p = ins_path;
      if (fs::is_directory(p) && fs::exists(p / "manifest.txt")) {
        const auto ckpt = load_checkpoint(p);
        const auto& mc = ckpt.model.config();
        std::printf("checkpoint: %zu tensors, %zu scalars, head %s, inputs %zu, actions %zu, agents %zu\n",
                    ckpt.model.params().size(), ckpt.model.params().scalar_count(), to_string(mc.head_mode).c_str(),
                    mc.input_channels, mc.action_count, mc.agent_count);
        for (const auto& [k, v] : ckpt.info) std::printf("  %s=%s\n", k.c_str(), v.c_str());
      } else {
        const auto text = read_file(p);
        if (text.starts_with("domain=")) {
          const auto inst = parse_instance(text);
          std::cout << text;
          const auto len = visit_instance(inst, [](auto tag, const auto& i) {
            using D = decltype(tag);
            return oracle_solve<D>(i.world, i.initial).length();
          });
          std::printf("%s, optimal plan length %zu\n", to_string(domain_of(inst)).c_str(), len);
        } else if (text.starts_with("{")) {
          const auto plans = parse_plans(text);
          const Dataset d = build_dataset(plans.domain, plans.records);
          std::printf("plan file: %s, %zu records, %zu samples, max difficulty %g\n", to_string(plans.domain).c_str(),
                      plans.records.size(), d.size(), d.max_difficulty());
        } else if (text.starts_with("# coat-results")) {
          const auto rows = parse_results_csv(text);
          std::cout << report_table(report_rows(rows));
        } else if (text.starts_with("# coat-")) {
          std::cout << text;
        } else {
          throw IoError(p.string() + ": unrecognised artifact");
        }
      }
    } else if (*pipe) {
      ExperimentConfig c = pipe_preset.empty() ? ExperimentConfig{} : desk_preset(parse_domain_tag(pipe_preset));
      if (!common.config_file.empty()) c = parse_config(read_file(common.config_file), c);
      apply_environment(c);
      if (common.threads >= 0) c.threads = common.threads;
      run_pipeline(c, &std::cout);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
