#include <cmath>
#include <vector>

#include "coat/tensor/kernels.hpp"

namespace coat::kernels::reference {

namespace {

bool inside(long r, long c, const GridDims& d) {
  return r >= 0 && c >= 0 && r < static_cast<long>(d.height) && c < static_cast<long>(d.width);
}

}  // namespace

template <typename T>
void conv3x3_forward(std::span<const T> input, GridDims d, std::span<const T> kernel, std::span<const T> bias,
                     std::size_t out_channels, std::span<T> output) {
  const std::size_t CI = d.channels;
  for (long r = 0; r < static_cast<long>(d.height); ++r)
    for (long c = 0; c < static_cast<long>(d.width); ++c)
      for (std::size_t o = 0; o < out_channels; ++o) {
        T s = bias[o];
        for (long ky = 0; ky < 3; ++ky)
          for (long kx = 0; kx < 3; ++kx) {
            if (!inside(r + ky - 1, c + kx - 1, d)) continue;
            for (std::size_t i = 0; i < CI; ++i)
              s += input[((r + ky - 1) * d.width + (c + kx - 1)) * CI + i] *
                   kernel[((ky * 3 + kx) * CI + i) * out_channels + o];
          }
        output[(r * d.width + c) * out_channels + o] = s;
      }
}

template <typename T>
void conv3x3_backward(std::span<const T> input, GridDims d, std::span<const T> kernel, std::size_t out_channels,
                      std::span<const T> grad_output, std::span<T> grad_input, std::span<T> grad_kernel,
                      std::span<T> grad_bias) {
  const std::size_t CI = d.channels;
  for (long r = 0; r < static_cast<long>(d.height); ++r)
    for (long c = 0; c < static_cast<long>(d.width); ++c)
      for (std::size_t o = 0; o < out_channels; ++o) {
        const T g = grad_output[(r * d.width + c) * out_channels + o];
        if (!grad_bias.empty()) grad_bias[o] += g;
        for (long ky = 0; ky < 3; ++ky)
          for (long kx = 0; kx < 3; ++kx) {
            if (!inside(r + ky - 1, c + kx - 1, d)) continue;
            for (std::size_t i = 0; i < CI; ++i) {
              const std::size_t in_idx = ((r + ky - 1) * d.width + (c + kx - 1)) * CI + i;
              const std::size_t k_idx = ((ky * 3 + kx) * CI + i) * out_channels + o;
              if (!grad_input.empty()) grad_input[in_idx] += kernel[k_idx] * g;
              if (!grad_kernel.empty()) grad_kernel[k_idx] += input[in_idx] * g;
            }
          }
      }
}

template <typename T>
void attention_forward(std::span<const T> input, GridDims d, std::size_t heads, std::span<T> output,
                       std::span<T> weights) {
  const std::size_t N = d.positions();
  const std::size_t C = d.channels;
  const std::size_t hw = C / heads;
  const std::size_t t = hw / 3;
  const std::size_t OC = heads * t;
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t k0 = h * hw, q0 = k0 + t, v0 = k0 + 2 * t;
    for (std::size_t u = 0; u < N; ++u) {
      std::vector<T> logits(N);
      for (std::size_t r = 0; r < N; ++r) {
        T dot = 0;
        for (std::size_t j = 0; j < t; ++j) dot += input[u * C + q0 + j] * input[r * C + k0 + j];
        logits[r] = dot;
      }
      T mx = logits[0];
      for (T l : logits) mx = std::max(mx, l);
      T denom = 0;
      for (T l : logits) denom += std::exp(l - mx);
      for (std::size_t j = 0; j < t; ++j) {
        T s = 0;
        for (std::size_t r = 0; r < N; ++r) s += std::exp(logits[r] - mx) / denom * input[r * C + v0 + j];
        output[u * OC + h * t + j] = s;
      }
      for (std::size_t r = 0; r < N; ++r) weights[(h * N + u) * N + r] = std::exp(logits[r] - mx) / denom;
    }
  }
}

template <typename T>
void attention_backward(std::span<const T> input, GridDims d, std::size_t heads, std::span<const T> weights,
                        std::span<const T> grad_output, std::span<T> grad_input) {
  const std::size_t N = d.positions();
  const std::size_t C = d.channels;
  const std::size_t hw = C / heads;
  const std::size_t t = hw / 3;
  const std::size_t OC = heads * t;
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t k0 = h * hw, q0 = k0 + t, v0 = k0 + 2 * t;
    for (std::size_t u = 0; u < N; ++u) {
      auto A = [&](std::size_t r) { return weights[(h * N + u) * N + r]; };
      auto G = [&](std::size_t j) { return grad_output[u * OC + h * t + j]; };
      // out_u = sum_r A_ur v_r, A_ur = softmax_r(q_u . k_r)
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t j = 0; j < t; ++j) grad_input[r * C + v0 + j] += A(r) * G(j);
      for (std::size_t r = 0; r < N; ++r) {
        // dOut/dlogit_ur = A_ur (v_r - out_u)
        T dl = 0;
        for (std::size_t j = 0; j < t; ++j) {
          T out_j = 0;
          for (std::size_t s = 0; s < N; ++s) out_j += A(s) * input[s * C + v0 + j];
          dl += G(j) * A(r) * (input[r * C + v0 + j] - out_j);
        }
        for (std::size_t j = 0; j < t; ++j) {
          grad_input[u * C + q0 + j] += dl * input[r * C + k0 + j];
          grad_input[r * C + k0 + j] += dl * input[u * C + q0 + j];
        }
      }
    }
  }
}

#define COAT_INSTANTIATE_REFERENCE(T)                                                                          \
  template void conv3x3_forward<T>(std::span<const T>, GridDims, std::span<const T>, std::span<const T>,      \
                                   std::size_t, std::span<T>);                                                \
  template void conv3x3_backward<T>(std::span<const T>, GridDims, std::span<const T>, std::size_t,            \
                                    std::span<const T>, std::span<T>, std::span<T>, std::span<T>);            \
  template void attention_forward<T>(std::span<const T>, GridDims, std::size_t, std::span<T>, std::span<T>);  \
  template void attention_backward<T>(std::span<const T>, GridDims, std::size_t, std::span<const T>,          \
                                      std::span<const T>, std::span<T>);

COAT_INSTANTIATE_REFERENCE(float)
COAT_INSTANTIATE_REFERENCE(double)

#undef COAT_INSTANTIATE_REFERENCE

}  // namespace coat::kernels::reference
