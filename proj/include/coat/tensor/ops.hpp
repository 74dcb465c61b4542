#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "coat/tensor/tape.hpp"

namespace coat {

enum class Activation { identity, relu, softmax };

enum class LossKind { mae, categorical_cross_entropy };

/// Parses "mae" / "categorical_cross_entropy" (alias "ce"); anything else is a usage error.
LossKind parse_loss_kind(std::string_view name);

/// Added inside the logarithm of the cross-entropy loss.
inline constexpr double kCrossEntropyEpsilon = 1e-9;

struct GridPos {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const GridPos&) const = default;
};

namespace ops {

/// 3x3 cross-correlation with one cell of zero padding; output keeps h x w.
template <typename T>
Var conv2d_same(Tape<T>& tape, Var input, Var kernels, Var bias);

template <typename T>
Var relu(Tape<T>& tape, Var x);

template <typename T>
Var add(Tape<T>& tape, Var a, Var b);

template <typename T>
Var scale(Tape<T>& tape, Var x, T factor);

/// Concatenates two grids with equal height and width along channels.
template <typename T>
Var concat_channels(Tape<T>& tape, Var a, Var b);

/// Concatenates flat vectors in order.
template <typename T>
Var concat(Tape<T>& tape, const std::vector<Var>& parts);

/// Multi-head self-attention over all grid positions; see kernels.hpp for the channel layout.
template <typename T>
Var self_attention(Tape<T>& tape, Var x, std::size_t heads);

/// Concatenated channel vectors of a grid at the given positions.
template <typename T>
Var gather_positions(Tape<T>& tape, Var grid, const std::vector<GridPos>& positions);

/// x (n) times weights (n x m) plus bias (m), then the activation.
template <typename T>
Var dense(Tape<T>& tape, Var x, Var weights, Var bias, Activation activation);

template <typename T>
Var softmax(Tape<T>& tape, Var x);

template <typename T>
Var sum(Tape<T>& tape, Var x);

template <typename T>
Var sum_squares(Tape<T>& tape, Var x);

template <typename T>
Var mae(Tape<T>& tape, Var prediction, Var target);

template <typename T>
Var cross_entropy(Tape<T>& tape, Var prediction, Var target);

template <typename T>
Var loss(Tape<T>& tape, LossKind kind, Var prediction, Var target);

}  // namespace ops

/// Tape-free loss evaluation.
template <typename T>
T loss_eval(LossKind kind, const Tensor<T>& prediction, const Tensor<T>& target);

}  // namespace coat
