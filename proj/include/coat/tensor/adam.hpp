#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "coat/tensor/param_store.hpp"

namespace coat {

template <typename T>
struct AdamState {
  std::map<std::string, Tensor<T>> first_moment;
  std::map<std::string, Tensor<T>> second_moment;
  std::size_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of every trainable parameter. Moments are
/// created lazily with the parameter's shape; `step` advances by one.
template <typename T>
void adam_step(ParamStore<T>& params, const Gradients<T>& grads, AdamState<T>& state, double learning_rate);

}  // namespace coat
