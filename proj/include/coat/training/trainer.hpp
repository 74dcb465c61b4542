#pragma once

#include <cstdint>
#include <vector>

#include "coat/model/model.hpp"
#include "coat/tensor/adam.hpp"
#include "coat/training/dataset.hpp"

namespace coat {

struct TrainConfig {
  double learning_rate = 1e-3;
  double curriculum_learning_rate = 1e-4;
  std::size_t epochs = 30;
  std::size_t curriculum_epochs = 10;
  std::size_t batch_size = 32;
  /// Weight of the policy cross-entropy; ignored by single-head models.
  double policy_weight = 1.0;
  std::uint64_t seed = 1;
  /// Stop after this many Adam steps (0 = no cap).
  std::size_t max_steps = 0;
  /// Stop once the exact training MAE, measured after each epoch, drops
  /// below this (0 = never).
  double stop_below_mae = 0.0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct LossBreakdown {
  double loss = 0.0;
  double mae = 0.0;
  double cross_entropy = 0.0;
  std::size_t count = 0;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  std::size_t steps = 0;  // cumulative
  /// Running means over the epoch's batches.
  double train_loss = 0.0;
  double train_mae = 0.0;
  /// Exact, after the epoch; NaN when not measured.
  double train_mae_exact = 0.0;
  double validation_loss = 0.0;
  double validation_mae = 0.0;
};

struct TrainHistory {
  /// Loss of the incoming parameters on the training split.
  double initial_loss = 0.0;
  std::vector<EpochMetrics> epochs;
  std::size_t steps = 0;
};

/// Effective policy weight: zero for single-head models.
double effective_policy_weight(const ModelConfig& config, const TrainConfig& train);

/// Checks that model and dataset agree on input width, actions and agents.
void check_compatible(const ModelConfig& config, const Dataset& data);

/// Mean loss over `indices` without touching the parameters.
LossBreakdown dataset_loss(const Model<float>& model, const Dataset& data, const std::vector<std::size_t>& indices,
                           double policy_weight);

/// Mean of MAE + w * CE over a batch and its gradient, accumulated in batch
/// order so the result does not depend on the thread count.
LossBreakdown batch_gradients(const Model<float>& model, const Dataset& data, const std::vector<std::size_t>& batch,
                              double policy_weight, Gradients<float>& grads);

/// Adam over shuffled batches of the training split, starting from the
/// model's current parameters.
TrainHistory train(Model<float>& model, const Dataset& data, const TrainConfig& config, double learning_rate,
                   std::size_t epochs);
inline TrainHistory train(Model<float>& model, const Dataset& data, const TrainConfig& config) {
  return train(model, data, config, config.learning_rate, config.epochs);
}

}  // namespace coat
