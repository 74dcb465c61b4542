#pragma once

#include <cstddef>
#include <span>

// Raw compute kernels behind the differentiable ops. Grid buffers are
// row-major (h, w, c); conv kernels are (3, 3, c_in, c_out).
//
// `coat::kernels` holds the OpenMP-parallel versions used everywhere else.
// `coat::kernels::reference` holds naive serial loops evaluated straight from
// the defining formulas; they are kept for tests and the kernel benchmark.
namespace coat::kernels {

struct GridDims {
  std::size_t height;
  std::size_t width;
  std::size_t channels;
  std::size_t positions() const { return height * width; }
  std::size_t numel() const { return height * width * channels; }
};

template <typename T>
void conv3x3_forward(std::span<const T> input, GridDims in_dims, std::span<const T> kernel,
                     std::span<const T> bias, std::size_t out_channels, std::span<T> output);

// Accumulates (+=) into grad_input, grad_kernel and grad_bias.
template <typename T>
void conv3x3_backward(std::span<const T> input, GridDims in_dims, std::span<const T> kernel,
                      std::size_t out_channels, std::span<const T> grad_output, std::span<T> grad_input,
                      std::span<T> grad_kernel, std::span<T> grad_bias);

// Multi-head self-attention. Each head owns a contiguous block of
// channels/heads input channels split into key, query and value thirds (in
// that order). `weights` receives heads * N * N softmax weights, N = h*w.
template <typename T>
void attention_forward(std::span<const T> input, GridDims in_dims, std::size_t heads, std::span<T> output,
                       std::span<T> weights);

template <typename T>
void attention_backward(std::span<const T> input, GridDims in_dims, std::size_t heads,
                        std::span<const T> weights, std::span<const T> grad_output, std::span<T> grad_input);

template <typename T>
void dense_forward(std::span<const T> input, std::span<const T> weights, std::span<const T> bias,
                   std::span<T> output);

template <typename T>
void dense_backward(std::span<const T> input, std::span<const T> weights, std::span<const T> grad_output,
                    std::span<T> grad_input, std::span<T> grad_weights, std::span<T> grad_bias);

namespace reference {

template <typename T>
void conv3x3_forward(std::span<const T> input, GridDims in_dims, std::span<const T> kernel,
                     std::span<const T> bias, std::size_t out_channels, std::span<T> output);

template <typename T>
void conv3x3_backward(std::span<const T> input, GridDims in_dims, std::span<const T> kernel,
                      std::size_t out_channels, std::span<const T> grad_output, std::span<T> grad_input,
                      std::span<T> grad_kernel, std::span<T> grad_bias);

template <typename T>
void attention_forward(std::span<const T> input, GridDims in_dims, std::size_t heads, std::span<T> output,
                       std::span<T> weights);

template <typename T>
void attention_backward(std::span<const T> input, GridDims in_dims, std::size_t heads,
                        std::span<const T> weights, std::span<const T> grad_output, std::span<T> grad_input);

}  // namespace reference

}  // namespace coat::kernels
