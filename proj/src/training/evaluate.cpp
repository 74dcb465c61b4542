#include "coat/training/evaluate.hpp"

#include <exception>

#include "coat/error.hpp"

namespace coat {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::coat:
      return "coat";
    case SolverKind::blind:
      return "blind";
    case SolverKind::oracle:
      return "oracle";
  }
  return "?";
}

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "coat") return SolverKind::coat;
  if (text == "blind") return SolverKind::blind;
  if (text == "oracle") return SolverKind::oracle;
  throw UsageError("unknown solver '" + text + "' (expected coat, blind or oracle)");
}

std::vector<EvalItem> eval_items(const std::vector<Instance>& instances, const std::string& tier) {
  std::vector<EvalItem> items;
  items.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    EvalItem item{instances[i], tier + "-" + std::to_string(i), tier, 0};
    const auto& fields = meta_of(instances[i]).fields;
    if (auto it = fields.find("seed"); it != fields.end()) item.seed = std::stoull(it->second);
    items.push_back(std::move(item));
  }
  return items;
}

EvalRow solve_one(const Model<float>* model, const EvalItem& item, const SearchBudget& budget, SolverKind solver) {
  if (solver == SolverKind::coat && !model) throw UsageError("the coat solver needs a model");
  EvalRow row{item.id, item.tier, to_string(solver), false, 0, 0, 0.0, item.seed, SearchOutcome::exhausted, {}};
  visit_instance(item.instance, [&](auto tag, const auto& inst) {
    using D = decltype(tag);
    SearchResult<D> result;
    switch (solver) {
      case SolverKind::coat:
        result = astar<D>(inst.world, inst.initial, NeuralHeuristic<D>(*model, inst.world), budget);
        break;
      case SolverKind::blind:
        result = astar_blind<D>(inst.world, inst.initial, budget);
        break;
      case SolverKind::oracle:
        result = oracle_search<D>(inst.world, inst.initial, budget);
        break;
    }
    row.outcome = result.outcome;
    row.solved = result.solved();
    row.expansions = result.stats.expanded;
    row.elapsed_ms = result.stats.elapsed_ms;
    if (result.plan) {
      // never report a plan that does not replay
      if (!validate_plan<D>(inst.world, inst.initial, result.plan->actions).valid)
        throw ContractError("search returned an invalid plan for " + item.id);
      row.plan_length = result.plan->length();
      row.actions = result.plan->actions;
    }
  });
  return row;
}

EvalSummary summarize(std::vector<EvalRow> rows) {
  EvalSummary s;
  s.total = rows.size();
  double length = 0.0, expansions = 0.0;
  for (const auto& r : rows) {
    if (!r.solved) continue;
    ++s.solved;
    length += static_cast<double>(r.plan_length);
    expansions += static_cast<double>(r.expansions);
  }
  if (s.total) s.coverage = static_cast<double>(s.solved) / static_cast<double>(s.total);
  if (s.solved) {
    s.avg_plan_length = length / static_cast<double>(s.solved);
    s.avg_expansions = expansions / static_cast<double>(s.solved);
  }
  s.rows = std::move(rows);
  return s;
}

EvalSummary evaluate(const Model<float>* model, const std::vector<EvalItem>& items, const SearchBudget& budget,
                     SolverKind solver) {
  budget.validate();
  if (solver == SolverKind::coat && !model) throw UsageError("the coat solver needs a model");
  std::vector<EvalRow> rows(items.size());
  std::vector<std::exception_ptr> errors(items.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      rows[i] = solve_one(model, items[i], budget, solver);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return summarize(std::move(rows));
}

}  // namespace coat
