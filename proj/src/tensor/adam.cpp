#include "coat/tensor/adam.hpp"

#include <cmath>

namespace coat {

template <typename T>
void adam_step(ParamStore<T>& params, const Gradients<T>& grads, AdamState<T>& state, double learning_rate) {
  if (!(learning_rate > 0)) throw ContractError("adam_step: learning rate must be positive");
  for (const auto& [name, entry] : params) {
    if (!entry.trainable) continue;
    auto g = grads.find(name);
    if (g == grads.end()) throw ContractError("adam_step: missing gradient for trainable parameter " + name);
    if (g->second.shape() != entry.value.shape())
      throw ShapeError("adam_step: gradient shape " + g->second.shape().str() + " does not match parameter " + name);
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);

  for (auto& [name, entry] : params) {
    if (!entry.trainable) continue;
    const auto& g = grads.at(name);
    auto& m = state.first_moment.try_emplace(name, Tensor<T>(entry.value.shape())).first->second;
    auto& v = state.second_moment.try_emplace(name, Tensor<T>(entry.value.shape())).first->second;
    auto& p = entry.value;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
      const double vi = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double m_hat = mi / correction1;
      const double v_hat = vi / correction2;
      p[i] = static_cast<T>(p[i] - learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon));
    }
  }
}

template void adam_step<float>(ParamStore<float>&, const Gradients<float>&, AdamState<float>&, double);
template void adam_step<double>(ParamStore<double>&, const Gradients<double>&, AdamState<double>&, double);

}  // namespace coat
