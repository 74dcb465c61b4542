#include "coat/training/trainer.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "coat/error.hpp"
#include "coat/random.hpp"
#include "coat/tensor/ops.hpp"

namespace coat {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(curriculum_learning_rate > 0.0)) throw ConfigError("curriculum_learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(policy_weight >= 0.0)) throw ConfigError("policy_weight must be non-negative");
  if (stop_below_mae < 0.0) throw ConfigError("stop_below_mae must be non-negative");
}

double effective_policy_weight(const ModelConfig& config, const TrainConfig& train) {
  return config.head_mode == HeadMode::dual ? train.policy_weight : 0.0;
}

void check_compatible(const ModelConfig& config, const Dataset& data) {
  const auto tag = data.domain();
  if (config.input_channels != input_channels(tag) || config.action_count != action_count(tag) ||
      config.agent_count != agent_count(tag))
    throw ConfigError("model (inputs " + std::to_string(config.input_channels) + ", actions " +
                      std::to_string(config.action_count) + ", agents " + std::to_string(config.agent_count) +
                      ") does not fit the " + to_string(tag) + " dataset");
}

namespace {

struct SampleOutcome {
  double loss = 0.0, mae = 0.0, ce = 0.0;
};

// Records one sample's loss on `tape`; returns the loss variable.
Var sample_loss(Tape<float>& tape, const Model<float>& model, const Dataset& data, std::size_t index,
                double policy_weight, SampleOutcome& out) {
  const auto& sample = data.samples()[index];
  const auto& enc = data.encoded(index);
  const auto result = model.forward(tape, tape.constant(enc.tensor), enc.agents);
  Var mae = ops::mae(tape, result.raw_value, tape.constant(Tensor<float>::scalar(static_cast<float>(sample.distance))));
  out.mae = tape.value(mae)[0];
  Var total = mae;
  if (policy_weight > 0.0 && result.policy && sample.action) {
    Tensor<float> onehot = Tensor<float>::vector(model.config().action_count);
    onehot[static_cast<std::size_t>(*sample.action)] = 1.0f;
    Var ce = ops::cross_entropy(tape, *result.policy, tape.constant(onehot));
    out.ce = tape.value(ce)[0];
    total = ops::add(tape, mae, ops::scale(tape, ce, static_cast<float>(policy_weight)));
  }
  out.loss = tape.value(total)[0];
  return total;
}

}  // namespace

LossBreakdown dataset_loss(const Model<float>& model, const Dataset& data, const std::vector<std::size_t>& indices,
                           double policy_weight) {
  std::vector<SampleOutcome> outcomes(indices.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < indices.size(); ++i) {
    Tape<float> tape(&model.params(), false);
    sample_loss(tape, model, data, indices[i], policy_weight, outcomes[i]);
  }
  LossBreakdown b;
  for (const auto& o : outcomes) {
    b.loss += o.loss;
    b.mae += o.mae;
    b.cross_entropy += o.ce;
  }
  b.count = indices.size();
  if (b.count > 0) {
    b.loss /= static_cast<double>(b.count);
    b.mae /= static_cast<double>(b.count);
    b.cross_entropy /= static_cast<double>(b.count);
  }
  return b;
}

LossBreakdown batch_gradients(const Model<float>& model, const Dataset& data, const std::vector<std::size_t>& batch,
                              double policy_weight, Gradients<float>& grads) {
  std::vector<SampleOutcome> outcomes(batch.size());
  std::vector<Gradients<float>> per_sample(batch.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < batch.size(); ++i) {
    Tape<float> tape(&model.params());
    Var loss = sample_loss(tape, model, data, batch[i], policy_weight, outcomes[i]);
    per_sample[i] = tape.backward(loss);
  }
  grads.clear();
  const float inv = 1.0f / static_cast<float>(batch.size());
  LossBreakdown b;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (auto& [name, g] : per_sample[i]) {
      auto it = grads.find(name);
      if (it == grads.end()) {
        it = grads.emplace(name, Tensor<float>(g.shape())).first;
      }
      auto dst = it->second.data();
      const auto src = g.data();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k] * inv;
    }
    b.loss += outcomes[i].loss;
    b.mae += outcomes[i].mae;
    b.cross_entropy += outcomes[i].ce;
  }
  b.count = batch.size();
  b.loss /= static_cast<double>(b.count);
  b.mae /= static_cast<double>(b.count);
  b.cross_entropy /= static_cast<double>(b.count);
  return b;
}

TrainHistory train(Model<float>& model, const Dataset& data, const TrainConfig& config, double learning_rate,
                   std::size_t epochs) {
  config.validate();
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  check_compatible(model.config(), data);
  if (data.train_indices().empty()) throw UsageError("training split is empty");

  const double w = effective_policy_weight(model.config(), config);
  TrainHistory history;
  history.initial_loss = dataset_loss(model, data, data.train_indices(), w).loss;

  std::mt19937_64 rng(config.seed);
  AdamState<float> adam;
  Gradients<float> grads;
  std::vector<std::size_t> order = data.train_indices();
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    shuffle_in_place(order, rng);
    EpochMetrics m;
    m.epoch = epoch + 1;
    double loss_sum = 0.0, mae_sum = 0.0;
    std::size_t seen = 0;
    bool capped = false;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      if (config.max_steps && history.steps >= config.max_steps) {
        capped = true;
        break;
      }
      const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), start + config.batch_size)));
      const auto b = batch_gradients(model, data, batch, w, grads);
      adam_step(model.params(), grads, adam, learning_rate);
      ++history.steps;
      loss_sum += b.loss * static_cast<double>(b.count);
      mae_sum += b.mae * static_cast<double>(b.count);
      seen += b.count;
    }
    if (seen == 0) break;
    m.steps = history.steps;
    m.train_loss = loss_sum / static_cast<double>(seen);
    m.train_mae = mae_sum / static_cast<double>(seen);
    m.train_mae_exact = config.stop_below_mae > 0.0 ? dataset_loss(model, data, data.train_indices(), w).mae : kNaN;
    if (data.validation_indices().empty()) {
      m.validation_loss = m.validation_mae = kNaN;
    } else {
      const auto v = dataset_loss(model, data, data.validation_indices(), w);
      m.validation_loss = v.loss;
      m.validation_mae = v.mae;
    }
    history.epochs.push_back(m);
    if (capped) break;
    if (config.stop_below_mae > 0.0 && m.train_mae_exact < config.stop_below_mae) break;
  }
  return history;
}

}  // namespace coat
