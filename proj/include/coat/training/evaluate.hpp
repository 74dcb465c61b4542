#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "coat/model/model.hpp"
#include "coat/search/oracle.hpp"

namespace coat {

/// h(s) for A*: the value head's raw output clamped at zero.
inline double heuristic_value(float raw) { return std::max(0.0, static_cast<double>(raw)); }

template <typename D>
class NeuralHeuristic {
 public:
  NeuralHeuristic(const Model<float>& model, const typename D::World& world) : model_(&model), world_(&world) {}

  double operator()(const typename D::State& state) const {
    const auto enc = encode_pair<D>(*world_, state);
    return heuristic_value(model_->predict(enc.tensor, enc.agents).value);
  }

 private:
  const Model<float>* model_;
  const typename D::World* world_;
};

enum class SolverKind { coat, blind, oracle };
std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);

/// An instance to evaluate, with the labels that end up in the CSV.
struct EvalItem {
  Instance instance;
  std::string id;
  std::string tier;
  std::uint64_t seed = 0;
};

struct EvalRow {
  std::string instance_id;
  std::string tier;
  std::string solver;
  bool solved = false;
  std::size_t plan_length = 0;
  std::size_t expansions = 0;
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
  SearchOutcome outcome = SearchOutcome::exhausted;
  std::vector<int> actions;
};

struct EvalSummary {
  std::size_t total = 0;
  std::size_t solved = 0;
  double coverage = 0.0;
  /// Over solved instances only; 0 when nothing was solved.
  double avg_plan_length = 0.0;
  double avg_expansions = 0.0;
  std::vector<EvalRow> rows;
};

/// Items built from instances, with ids "<tier>-<index>" and seeds from the
/// instance meta when present.
std::vector<EvalItem> eval_items(const std::vector<Instance>& instances, const std::string& tier);

/// Solves each item with A*. `model` is required for SolverKind::coat.
/// Instances run in parallel; rows keep the input order.
EvalSummary evaluate(const Model<float>* model, const std::vector<EvalItem>& items, const SearchBudget& budget,
                     SolverKind solver);

/// A* on one instance with the chosen heuristic.
EvalRow solve_one(const Model<float>* model, const EvalItem& item, const SearchBudget& budget, SolverKind solver);

EvalSummary summarize(std::vector<EvalRow> rows);

}  // namespace coat
