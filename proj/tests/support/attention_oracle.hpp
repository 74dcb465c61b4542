#pragma once

// Literal evaluation of the self-attention formula: for every output position
// (u, v) a double loop over all positions (r, s) of
//   exp(q_uv . k_rs) / sum_{r',s'} exp(q_uv . k_r's') * v_rs
// with no max-subtraction and no shared buffers. Test-only.

#include <cmath>

#include "coat/tensor/tensor.hpp"

namespace coat::testing {

inline Tensor<double> literal_attention(const Tensor<double>& z, std::size_t heads) {
  const std::size_t h = z.height(), w = z.width(), d = z.channels();
  const std::size_t per_head = d / heads;
  const std::size_t third = per_head / 3;
  Tensor<double> out = Tensor<double>::grid(h, w, heads * third);
  for (std::size_t head = 0; head < heads; ++head) {
    const std::size_t k0 = head * per_head;
    const std::size_t q0 = k0 + third;
    const std::size_t v0 = k0 + 2 * third;
    auto logit = [&](std::size_t u, std::size_t v, std::size_t r, std::size_t s) {
      double dot = 0;
      for (std::size_t j = 0; j < third; ++j) dot += z.at(u, v, q0 + j) * z.at(r, s, k0 + j);
      return dot;
    };
    for (std::size_t u = 0; u < h; ++u)
      for (std::size_t v = 0; v < w; ++v) {
        double denom = 0;
        for (std::size_t r = 0; r < h; ++r)
          for (std::size_t s = 0; s < w; ++s) denom += std::exp(logit(u, v, r, s));
        for (std::size_t j = 0; j < third; ++j) {
          double acc = 0;
          for (std::size_t r = 0; r < h; ++r)
            for (std::size_t s = 0; s < w; ++s) acc += std::exp(logit(u, v, r, s)) / denom * z.at(r, s, v0 + j);
          out.at(u, v, head * third + j) = acc;
        }
      }
  }
  return out;
}

}  // namespace coat::testing
