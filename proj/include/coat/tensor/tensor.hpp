#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "coat/error.hpp"

namespace coat {

/// Dimensions of a dense row-major tensor. Grid tensors are (height, width,
/// channels); conv kernels are (3, 3, c_in, c_out); vectors have rank 1.
class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<std::size_t> dims) : dims_(dims) {}
  explicit Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {}

  std::size_t rank() const { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_.at(i); }
  const std::vector<std::size_t>& dims() const { return dims_; }

  std::size_t numel() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  }

  bool operator==(const Shape&) const = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(dims_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<std::size_t> dims_;
};

/// Dense tensor over float (training, inference) or double (gradient checks).
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0)) : shape_(std::move(shape)), data_(shape_.numel(), fill) {}
  Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.numel())
      throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                       shape_.str());
  }

  static Tensor grid(std::size_t h, std::size_t w, std::size_t c) { return Tensor(Shape{h, w, c}); }
  static Tensor vector(std::size_t n) { return Tensor(Shape{n}); }
  static Tensor scalar(T v) { return Tensor(Shape{1}, std::vector<T>{v}); }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::size_t rank() const { return shape_.rank(); }
  bool empty() const { return data_.empty(); }

  // Grid accessors, valid for rank-3 tensors.
  std::size_t height() const { return shape_[0]; }
  std::size_t width() const { return shape_[1]; }
  std::size_t channels() const { return shape_[2]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(std::size_t r, std::size_t c, std::size_t ch) { return data_[(r * shape_[1] + c) * shape_[2] + ch]; }
  const T& at(std::size_t r, std::size_t c, std::size_t ch) const {
    return data_[(r * shape_[1] + c) * shape_[2] + ch];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <typename U>
  Tensor<U> cast() const {
    return Tensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

template <typename T>
void require_shape(const Tensor<T>& t, const Shape& expected, const char* what) {
  if (t.shape() != expected)
    throw ShapeError(std::string(what) + ": expected shape " + expected.str() + ", got " + t.shape().str());
}

}  // namespace coat
