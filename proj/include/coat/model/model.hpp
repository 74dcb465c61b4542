#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coat/nn/layers.hpp"
#include "coat/tensor/param_store.hpp"

namespace coat {

enum class HeadMode { dual, single };

std::string to_string(HeadMode mode);
HeadMode parse_head_mode(const std::string& text);

/// Architecture of the CoAt network. Every parameter shape follows from these
/// fields alone.
struct ModelConfig {
  std::size_t preconv_layers = 7;
  std::size_t preconv_filters = 64;
  std::size_t blocks_per_branch = 4;
  std::size_t block_filters = 180;
  std::size_t attention_heads = 2;
  std::size_t posenc_depth = 24;
  std::size_t fc1_width = 256;
  HeadMode head_mode = HeadMode::dual;
  std::size_t action_count = 8;
  std::size_t input_channels = 10;
  // Agents whose hidden vectors are gathered by the flatten (Floor-Tile: 2).
  std::size_t agent_count = 1;
  bool desk_scale = false;

  static ModelConfig paper(std::size_t input_channels, std::size_t action_count, HeadMode mode,
                           std::size_t agent_count = 1);
  /// 2 pre-conv x 16, 2 blocks x 24 filters, 2 heads, d_e = 8, FC1 64.
  static ModelConfig desk(std::size_t input_channels, std::size_t action_count, HeadMode mode,
                          std::size_t agent_count = 1);

  void validate() const;

  std::size_t branch_count() const { return head_mode == HeadMode::dual ? 2 : 1; }
  std::size_t block_output_channels() const { return block_filters / 3 + posenc_depth; }
  std::size_t fc1_inputs() const { return branch_count() * agent_count * block_output_channels(); }
  std::vector<nn::CoAtBlockSpec> branch_blocks(char branch) const;

  /// Canonical parameter names mapped to their shapes.
  std::map<std::string, Shape> parameter_shapes() const;

  bool operator==(const ModelConfig&) const = default;
};

template <typename T>
struct ForwardResult {
  std::optional<Var> policy;
  Var raw_value;
};

template <typename T>
struct Prediction {
  std::optional<std::vector<T>> policy;
  T value = 0;  // raw FC2-H output, not clamped
};

template <typename T>
class Model {
 public:
  Model(ModelConfig config, ParamStore<T> params);

  const ModelConfig& config() const { return config_; }
  ParamStore<T>& params() { return params_; }
  const ParamStore<T>& params() const { return params_; }

  /// Records the network on `tape`; the tape must draw parameters from params().
  ForwardResult<T> forward(Tape<T>& tape, Var encoded, const std::vector<GridPos>& agents) const;

  Prediction<T> predict(const Tensor<T>& encoded, const std::vector<GridPos>& agents) const;

  template <typename U>
  Model<U> cast() const {
    return Model<U>(config_, params_.template cast<U>());
  }

 private:
  ModelConfig config_;
  ParamStore<T> params_;
};

template <typename T>
Model<T> build_model(const ModelConfig& config, std::uint64_t seed);

}  // namespace coat
