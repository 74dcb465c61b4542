#pragma once

#include <cstddef>
#include <string>

#include "coat/tensor/ops.hpp"

namespace coat::nn {

struct AttentionConfig {
  std::size_t heads = 2;
  std::size_t channels = 0;

  /// Throws ConfigError unless channels split evenly into heads and each
  /// head's block splits into key/query/value thirds.
  void validate() const;
  std::size_t output_channels() const { return channels / 3; }
};

struct PosEncConfig {
  std::size_t depth = 24;
  void validate() const;
};

/// theta(p) = 1 / 10000^(4p / depth)
double positional_frequency(std::size_t p, std::size_t depth);

/// Harmonic row/column encoding, shape (h, w, depth). Channels
/// [0, depth/2) encode the row index u as interleaved sin/cos pairs, channels
/// [depth/2, depth) encode the column index v the same way. Indices are 0-based.
template <typename T>
Tensor<T> positional_encoding(std::size_t height, std::size_t width, const PosEncConfig& config);

template <typename T>
Var self_attention(Tape<T>& tape, Var z, const AttentionConfig& config);

/// Parameters of one CoAt block. The conv kernel and bias live in the tape's
/// ParamStore under `<prefix>.conv.kernel` and `<prefix>.conv.bias`.
struct CoAtBlockSpec {
  std::string prefix;
  std::size_t in_channels = 0;
  std::size_t filters = 180;
  std::size_t attention_heads = 2;
  PosEncConfig posenc;

  void validate() const;
  std::size_t output_channels() const { return filters / 3 + posenc.depth; }
  std::string kernel_name() const { return prefix + ".conv.kernel"; }
  std::string bias_name() const { return prefix + ".conv.bias"; }
};

/// conv3x3 + ReLU (plus identity skip when in/out channels agree), then
/// self-attention, then the positional encoding appended along channels.
template <typename T>
Var coat_block(Tape<T>& tape, Var z, const CoAtBlockSpec& spec);

/// conv3x3 + ReLU with an identity skip when in/out channels agree. Shared by
/// the pre-conv stack and the CoAt blocks.
template <typename T>
Var conv_relu_skip(Tape<T>& tape, Var z, const std::string& kernel_name, const std::string& bias_name);

}  // namespace coat::nn
