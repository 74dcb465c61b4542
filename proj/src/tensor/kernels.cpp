#include "coat/tensor/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace coat::kernels {

template <typename T>
void conv3x3_forward(std::span<const T> input, GridDims d, std::span<const T> kernel, std::span<const T> bias,
                     std::size_t out_channels, std::span<T> output) {
  const long H = static_cast<long>(d.height);
  const long W = static_cast<long>(d.width);
  const std::size_t CI = d.channels;
  const std::size_t CO = out_channels;
  const T* in = input.data();
  const T* K = kernel.data();
  T* out = output.data();

#pragma omp parallel for schedule(static)
  for (long r = 0; r < H; ++r) {
    for (long c = 0; c < W; ++c) {
      T* o = out + (r * W + c) * CO;
      std::copy(bias.begin(), bias.end(), o);
      for (long ky = 0; ky < 3; ++ky) {
        const long rr = r + ky - 1;
        if (rr < 0 || rr >= H) continue;
        for (long kx = 0; kx < 3; ++kx) {
          const long cc = c + kx - 1;
          if (cc < 0 || cc >= W) continue;
          const T* ip = in + (rr * W + cc) * CI;
          const T* kp = K + (ky * 3 + kx) * CI * CO;
          for (std::size_t i = 0; i < CI; ++i) {
            const T x = ip[i];
            if (x == T(0)) continue;  // one-hot inputs are mostly zero
            const T* kr = kp + i * CO;
            for (std::size_t j = 0; j < CO; ++j) o[j] += x * kr[j];
          }
        }
      }
    }
  }
}

template <typename T>
void conv3x3_backward(std::span<const T> input, GridDims d, std::span<const T> kernel, std::size_t out_channels,
                      std::span<const T> grad_output, std::span<T> grad_input, std::span<T> grad_kernel,
                      std::span<T> grad_bias) {
  const long H = static_cast<long>(d.height);
  const long W = static_cast<long>(d.width);
  const std::size_t CI = d.channels;
  const std::size_t CO = out_channels;
  const T* in = input.data();
  const T* K = kernel.data();
  const T* go = grad_output.data();

  if (!grad_input.empty()) {
    T* gi_base = grad_input.data();
#pragma omp parallel for schedule(static)
    for (long rr = 0; rr < H; ++rr) {
      for (long cc = 0; cc < W; ++cc) {
        T* gi = gi_base + (rr * W + cc) * CI;
        for (long ky = 0; ky < 3; ++ky) {
          const long r = rr - ky + 1;
          if (r < 0 || r >= H) continue;
          for (long kx = 0; kx < 3; ++kx) {
            const long c = cc - kx + 1;
            if (c < 0 || c >= W) continue;
            const T* g = go + (r * W + c) * CO;
            const T* kp = K + (ky * 3 + kx) * CI * CO;
            for (std::size_t i = 0; i < CI; ++i) {
              const T* kr = kp + i * CO;
              T s = 0;
              for (std::size_t j = 0; j < CO; ++j) s += kr[j] * g[j];
              gi[i] += s;
            }
          }
        }
      }
    }
  }

  if (!grad_kernel.empty()) {
    T* gk_base = grad_kernel.data();
    const long jobs = static_cast<long>(9 * CI);
#pragma omp parallel for schedule(static)
    for (long job = 0; job < jobs; ++job) {
      const long tap = job / static_cast<long>(CI);
      const std::size_t i = static_cast<std::size_t>(job) % CI;
      const long ky = tap / 3;
      const long kx = tap % 3;
      T* gk = gk_base + (static_cast<std::size_t>(tap) * CI + i) * CO;
      for (long r = 0; r < H; ++r) {
        const long rr = r + ky - 1;
        if (rr < 0 || rr >= H) continue;
        for (long c = 0; c < W; ++c) {
          const long cc = c + kx - 1;
          if (cc < 0 || cc >= W) continue;
          const T x = in[(rr * W + cc) * CI + i];
          if (x == T(0)) continue;
          const T* g = go + (r * W + c) * CO;
          for (std::size_t j = 0; j < CO; ++j) gk[j] += x * g[j];
        }
      }
    }
  }

  if (!grad_bias.empty()) {
    for (long p = 0; p < H * W; ++p) {
      const T* g = go + p * CO;
      for (std::size_t j = 0; j < CO; ++j) grad_bias[j] += g[j];
    }
  }
}

template <typename T>
void attention_forward(std::span<const T> input, GridDims d, std::size_t heads, std::span<T> output,
                       std::span<T> weights) {
  const std::size_t N = d.positions();
  const std::size_t C = d.channels;
  const std::size_t head_width = C / heads;
  const std::size_t third = head_width / 3;
  const std::size_t OC = heads * third;
  const T* in = input.data();
  T* out = output.data();
  T* wts = weights.data();

  const long jobs = static_cast<long>(heads * N);
#pragma omp parallel for schedule(static)
  for (long job = 0; job < jobs; ++job) {
    const std::size_t hd = static_cast<std::size_t>(job) / N;
    const std::size_t u = static_cast<std::size_t>(job) % N;
    const std::size_t base = hd * head_width;
    const T* q = in + u * C + base + third;
    T* row = wts + (hd * N + u) * N;

    T max_logit = -std::numeric_limits<T>::infinity();
    for (std::size_t r = 0; r < N; ++r) {
      const T* k = in + r * C + base;
      T dot = 0;
      for (std::size_t j = 0; j < third; ++j) dot += q[j] * k[j];
      row[r] = dot;
      max_logit = std::max(max_logit, dot);
    }
    T total = 0;
    for (std::size_t r = 0; r < N; ++r) {
      row[r] = std::exp(row[r] - max_logit);
      total += row[r];
    }
    const T inv = T(1) / total;
    T* o = out + u * OC + hd * third;
    std::fill(o, o + third, T(0));
    for (std::size_t r = 0; r < N; ++r) {
      row[r] *= inv;
      const T a = row[r];
      const T* v = in + r * C + base + 2 * third;
      for (std::size_t j = 0; j < third; ++j) o[j] += a * v[j];
    }
  }
}

template <typename T>
void attention_backward(std::span<const T> input, GridDims d, std::size_t heads, std::span<const T> weights,
                        std::span<const T> grad_output, std::span<T> grad_input) {
  const std::size_t N = d.positions();
  const std::size_t C = d.channels;
  const std::size_t head_width = C / heads;
  const std::size_t third = head_width / 3;
  const std::size_t OC = heads * third;
  const T* in = input.data();
  const T* wts = weights.data();
  const T* go = grad_output.data();
  T* gi = grad_input.data();

  // Gradient w.r.t. the logits, one N x N block per head.
  std::vector<T> dlogits(heads * N * N);

  const long jobs = static_cast<long>(heads * N);
#pragma omp parallel for schedule(static)
  for (long job = 0; job < jobs; ++job) {
    const std::size_t hd = static_cast<std::size_t>(job) / N;
    const std::size_t u = static_cast<std::size_t>(job) % N;
    const std::size_t base = hd * head_width;
    const T* a = wts + (hd * N + u) * N;
    const T* g = go + u * OC + hd * third;
    T* dl = dlogits.data() + (hd * N + u) * N;

    T weighted = 0;
    for (std::size_t r = 0; r < N; ++r) {
      const T* v = in + r * C + base + 2 * third;
      T dot = 0;
      for (std::size_t j = 0; j < third; ++j) dot += g[j] * v[j];
      dl[r] = dot;
      weighted += a[r] * dot;
    }
    T* gq = gi + u * C + base + third;
    for (std::size_t r = 0; r < N; ++r) {
      dl[r] = a[r] * (dl[r] - weighted);
      const T* k = in + r * C + base;
      for (std::size_t j = 0; j < third; ++j) gq[j] += dl[r] * k[j];
    }
  }

#pragma omp parallel for schedule(static)
  for (long job = 0; job < jobs; ++job) {
    const std::size_t hd = static_cast<std::size_t>(job) / N;
    const std::size_t r = static_cast<std::size_t>(job) % N;
    const std::size_t base = hd * head_width;
    T* gk = gi + r * C + base;
    T* gv = gi + r * C + base + 2 * third;
    for (std::size_t u = 0; u < N; ++u) {
      const T dl = dlogits[(hd * N + u) * N + r];
      const T a = wts[(hd * N + u) * N + r];
      const T* q = in + u * C + base + third;
      const T* g = go + u * OC + hd * third;
      for (std::size_t j = 0; j < third; ++j) {
        gk[j] += dl * q[j];
        gv[j] += a * g[j];
      }
    }
  }
}

template <typename T>
void dense_forward(std::span<const T> input, std::span<const T> weights, std::span<const T> bias,
                   std::span<T> output) {
  const std::size_t n = input.size();
  const std::size_t m = output.size();
  std::copy(bias.begin(), bias.end(), output.begin());
  for (std::size_t i = 0; i < n; ++i) {
    const T x = input[i];
    const T* w = weights.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) output[j] += x * w[j];
  }
}

template <typename T>
void dense_backward(std::span<const T> input, std::span<const T> weights, std::span<const T> grad_output,
                    std::span<T> grad_input, std::span<T> grad_weights, std::span<T> grad_bias) {
  const std::size_t n = input.size();
  const std::size_t m = grad_output.size();
  for (std::size_t i = 0; i < n; ++i) {
    const T* w = weights.data() + i * m;
    if (!grad_input.empty()) {
      T s = 0;
      for (std::size_t j = 0; j < m; ++j) s += w[j] * grad_output[j];
      grad_input[i] += s;
    }
    if (!grad_weights.empty()) {
      T* gw = grad_weights.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) gw[j] += input[i] * grad_output[j];
    }
  }
  if (!grad_bias.empty())
    for (std::size_t j = 0; j < m; ++j) grad_bias[j] += grad_output[j];
}

#define COAT_INSTANTIATE_KERNELS(T)                                                                            \
  template void conv3x3_forward<T>(std::span<const T>, GridDims, std::span<const T>, std::span<const T>,      \
                                   std::size_t, std::span<T>);                                                \
  template void conv3x3_backward<T>(std::span<const T>, GridDims, std::span<const T>, std::size_t,            \
                                    std::span<const T>, std::span<T>, std::span<T>, std::span<T>);            \
  template void attention_forward<T>(std::span<const T>, GridDims, std::size_t, std::span<T>, std::span<T>);  \
  template void attention_backward<T>(std::span<const T>, GridDims, std::size_t, std::span<const T>,          \
                                      std::span<const T>, std::span<T>);                                      \
  template void dense_forward<T>(std::span<const T>, std::span<const T>, std::span<const T>, std::span<T>);   \
  template void dense_backward<T>(std::span<const T>, std::span<const T>, std::span<const T>, std::span<T>,   \
                                  std::span<T>, std::span<T>);

COAT_INSTANTIATE_KERNELS(float)
COAT_INSTANTIATE_KERNELS(double)

#undef COAT_INSTANTIATE_KERNELS

}  // namespace coat::kernels
