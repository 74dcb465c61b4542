#include "coat/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "coat/tensor/kernels.hpp"

namespace coat {

LossKind parse_loss_kind(std::string_view name) {
  if (name == "mae") return LossKind::mae;
  if (name == "categorical_cross_entropy" || name == "ce") return LossKind::categorical_cross_entropy;
  throw UsageError("unknown loss kind: " + std::string(name));
}

namespace ops {

namespace {

template <typename T>
kernels::GridDims grid_dims(const Tensor<T>& t, const char* what) {
  if (t.rank() != 3) throw ShapeError(std::string(what) + ": expected a (h, w, c) grid, got " + t.shape().str());
  return {t.height(), t.width(), t.channels()};
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* what) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(what) + ": shape mismatch " + a.shape().str() + " vs " + b.shape().str());
}

}  // namespace

template <typename T>
Var conv2d_same(Tape<T>& tape, Var input, Var kernels, Var bias) {
  const auto& x = tape.value(input);
  const auto& k = tape.value(kernels);
  const auto& b = tape.value(bias);
  const auto dims = grid_dims(x, "conv2d_same input");
  if (k.rank() != 4 || k.shape()[0] != 3 || k.shape()[1] != 3)
    throw ShapeError("conv2d_same: kernels must be (3, 3, c_in, c_out), got " + k.shape().str());
  if (k.shape()[2] != dims.channels)
    throw ShapeError("conv2d_same: input has " + std::to_string(dims.channels) + " channels, kernels expect " +
                     std::to_string(k.shape()[2]));
  const std::size_t co = k.shape()[3];
  if (b.shape() != Shape{co}) throw ShapeError("conv2d_same: bias must be (" + std::to_string(co) + ")");

  Tensor<T> out = Tensor<T>::grid(dims.height, dims.width, co);
  kernels::conv3x3_forward<T>(x.data(), dims, k.data(), b.data(), co, out.data());

  const bool rg = tape.requires_grad(input) || tape.requires_grad(kernels) || tape.requires_grad(bias);
  Var out_var{tape.size()};
  return tape.push(std::move(out), rg, [=](Tape<T>& t) {
    std::span<T> gi, gk, gb;
    if (t.requires_grad(input)) gi = t.grad(input).data();
    if (t.requires_grad(kernels)) gk = t.grad(kernels).data();
    if (t.requires_grad(bias)) gb = t.grad(bias).data();
    kernels::conv3x3_backward<T>(t.value(input).data(), dims, t.value(kernels).data(), co,
                                 t.grad(out_var).data(), gi, gk, gb);
  });
}

template <typename T>
Var relu(Tape<T>& tape, Var x) {
  Tensor<T> out = tape.value(x);
  for (auto& v : out.storage()) v = std::max(v, T(0));
  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(x), [=](Tape<T>& t) {
    const auto& y = t.value(out_var);
    const auto& g = t.grad(out_var);
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] > T(0)) gx[i] += g[i];
  });
}

template <typename T>
Var add(Tape<T>& tape, Var a, Var b) {
  require_same_shape(tape.value(a), tape.value(b), "add");
  Tensor<T> out = tape.value(a);
  const auto& bv = tape.value(b);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(a) || tape.requires_grad(b), [=](Tape<T>& t) {
    for (Var in : {a, b}) {
      if (!t.requires_grad(in)) continue;
      const auto& g = t.grad(out_var);
      auto& gi = t.grad(in);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

template <typename T>
Var scale(Tape<T>& tape, Var x, T factor) {
  Tensor<T> out = tape.value(x);
  for (auto& v : out.storage()) v *= factor;
  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(x), [=](Tape<T>& t) {
    const auto& g = t.grad(out_var);
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += factor * g[i];
  });
}

template <typename T>
Var concat_channels(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.value(a);
  const auto& bv = tape.value(b);
  const auto da = grid_dims(av, "concat_channels lhs");
  const auto db = grid_dims(bv, "concat_channels rhs");
  if (da.height != db.height || da.width != db.width)
    throw ShapeError("concat_channels: spatial mismatch " + av.shape().str() + " vs " + bv.shape().str());
  const std::size_t ca = da.channels, cb = db.channels, c = ca + cb;
  Tensor<T> out = Tensor<T>::grid(da.height, da.width, c);
  for (std::size_t p = 0; p < da.positions(); ++p) {
    std::copy_n(av.data().begin() + p * ca, ca, out.data().begin() + p * c);
    std::copy_n(bv.data().begin() + p * cb, cb, out.data().begin() + p * c + ca);
  }
  const std::size_t positions = da.positions();
  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(a) || tape.requires_grad(b), [=](Tape<T>& t) {
    const auto& g = t.grad(out_var);
    if (t.requires_grad(a)) {
      auto& ga = t.grad(a);
      for (std::size_t p = 0; p < positions; ++p)
        for (std::size_t j = 0; j < ca; ++j) ga[p * ca + j] += g[p * c + j];
    }
    if (t.requires_grad(b)) {
      auto& gb = t.grad(b);
      for (std::size_t p = 0; p < positions; ++p)
        for (std::size_t j = 0; j < cb; ++j) gb[p * cb + j] += g[p * c + ca + j];
    }
  });
}

template <typename T>
Var concat(Tape<T>& tape, const std::vector<Var>& parts) {
  std::vector<T> data;
  bool rg = false;
  for (Var p : parts) {
    const auto& v = tape.value(p).storage();
    data.insert(data.end(), v.begin(), v.end());
    rg = rg || tape.requires_grad(p);
  }
  const std::size_t n = data.size();
  Var out_var{tape.size()};
  return tape.push(Tensor<T>(Shape{n}, std::move(data)), rg, [=](Tape<T>& t) {
    const auto& g = t.grad(out_var);
    std::size_t off = 0;
    for (Var p : parts) {
      const std::size_t len = t.value(p).size();
      if (t.requires_grad(p)) {
        auto& gp = t.grad(p);
        for (std::size_t i = 0; i < len; ++i) gp[i] += g[off + i];
      }
      off += len;
    }
  });
}

template <typename T>
Var self_attention(Tape<T>& tape, Var x, std::size_t heads) {
  const auto& xv = tape.value(x);
  const auto dims = grid_dims(xv, "self_attention input");
  if (heads == 0 || dims.channels % heads != 0 || (dims.channels / heads) % 3 != 0)
    throw ConfigError("self_attention: " + std::to_string(dims.channels) +
                      " channels cannot be split into key/query/value thirds over " + std::to_string(heads) +
                      " heads");
  const std::size_t out_channels = dims.channels / 3;
  const std::size_t n = dims.positions();
  Tensor<T> out = Tensor<T>::grid(dims.height, dims.width, out_channels);
  auto weights = std::make_shared<std::vector<T>>(heads * n * n);
  kernels::attention_forward<T>(xv.data(), dims, heads, out.data(), *weights);

  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(x), [=](Tape<T>& t) {
    kernels::attention_backward<T>(t.value(x).data(), dims, heads, *weights, t.grad(out_var).data(),
                                   t.grad(x).data());
  });
}

template <typename T>
Var gather_positions(Tape<T>& tape, Var grid, const std::vector<GridPos>& positions) {
  const auto& gv = tape.value(grid);
  const auto dims = grid_dims(gv, "gather_positions");
  for (const auto& p : positions)
    if (p.row >= dims.height || p.col >= dims.width)
      throw ContractError("gather_positions: position (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                          ") outside " + gv.shape().str());
  const std::size_t c = dims.channels;
  Tensor<T> out = Tensor<T>::vector(c * positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::size_t off = (positions[i].row * dims.width + positions[i].col) * c;
    std::copy_n(gv.data().begin() + off, c, out.data().begin() + i * c);
  }
  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(grid), [=](Tape<T>& t) {
    const auto& g = t.grad(out_var);
    auto& gg = t.grad(grid);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const std::size_t off = (positions[i].row * dims.width + positions[i].col) * c;
      for (std::size_t j = 0; j < c; ++j) gg[off + j] += g[i * c + j];
    }
  });
}

template <typename T>
Var softmax(Tape<T>& tape, Var x) {
  Tensor<T> out = tape.value(x);
  if (out.empty()) throw ShapeError("softmax of an empty tensor");
  const T mx = *std::max_element(out.storage().begin(), out.storage().end());
  T total = 0;
  for (auto& v : out.storage()) {
    v = std::exp(v - mx);
    total += v;
  }
  for (auto& v : out.storage()) v /= total;
  Var out_var{tape.size()};
  return tape.push(std::move(out), tape.requires_grad(x), [=](Tape<T>& t) {
    const auto& y = t.value(out_var);
    const auto& g = t.grad(out_var);
    T dot = 0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * g[i];
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < y.size(); ++i) gx[i] += y[i] * (g[i] - dot);
  });
}

template <typename T>
Var dense(Tape<T>& tape, Var x, Var weights, Var bias, Activation activation) {
  const auto& xv = tape.value(x);
  const auto& w = tape.value(weights);
  const auto& b = tape.value(bias);
  const std::size_t n = xv.size();
  if (w.rank() != 2 || w.shape()[0] != n)
    throw ShapeError("dense: weights " + w.shape().str() + " do not accept an input of length " + std::to_string(n));
  const std::size_t m = w.shape()[1];
  if (b.shape() != Shape{m}) throw ShapeError("dense: bias must be (" + std::to_string(m) + ")");

  Tensor<T> out = Tensor<T>::vector(m);
  kernels::dense_forward<T>(xv.data(), w.data(), b.data(), out.data());
  const bool rg = tape.requires_grad(x) || tape.requires_grad(weights) || tape.requires_grad(bias);
  Var out_var{tape.size()};
  Var linear = tape.push(std::move(out), rg, [=](Tape<T>& t) {
    std::span<T> gx, gw, gb;
    if (t.requires_grad(x)) gx = t.grad(x).data();
    if (t.requires_grad(weights)) gw = t.grad(weights).data();
    if (t.requires_grad(bias)) gb = t.grad(bias).data();
    kernels::dense_backward<T>(t.value(x).data(), t.value(weights).data(), t.grad(out_var).data(), gx, gw, gb);
  });
  switch (activation) {
    case Activation::identity:
      return linear;
    case Activation::relu:
      return relu(tape, linear);
    case Activation::softmax:
      return softmax(tape, linear);
  }
  return linear;
}

template <typename T>
Var sum(Tape<T>& tape, Var x) {
  T total = 0;
  for (T v : tape.value(x).storage()) total += v;
  Var out_var{tape.size()};
  return tape.push(Tensor<T>::scalar(total), tape.requires_grad(x), [=](Tape<T>& t) {
    const T g = t.grad(out_var)[0];
    for (auto& v : t.grad(x).storage()) v += g;
  });
}

template <typename T>
Var sum_squares(Tape<T>& tape, Var x) {
  T total = 0;
  for (T v : tape.value(x).storage()) total += v * v;
  Var out_var{tape.size()};
  return tape.push(Tensor<T>::scalar(total), tape.requires_grad(x), [=](Tape<T>& t) {
    const T g = t.grad(out_var)[0];
    const auto& xv = t.value(x);
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < xv.size(); ++i) gx[i] += T(2) * xv[i] * g;
  });
}

template <typename T>
Var mae(Tape<T>& tape, Var prediction, Var target) {
  const auto& p = tape.value(prediction);
  const auto& y = tape.value(target);
  require_same_shape(p, y, "mae");
  const std::size_t n = p.size();
  T total = 0;
  for (std::size_t i = 0; i < n; ++i) total += std::abs(p[i] - y[i]);
  Var out_var{tape.size()};
  return tape.push(Tensor<T>::scalar(total / T(n)), tape.requires_grad(prediction), [=](Tape<T>& t) {
    const T g = t.grad(out_var)[0] / T(n);
    const auto& pv = t.value(prediction);
    const auto& yv = t.value(target);
    auto& gp = t.grad(prediction);
    for (std::size_t i = 0; i < n; ++i) {
      const T d = pv[i] - yv[i];
      gp[i] += d > T(0) ? g : (d < T(0) ? -g : T(0));
    }
  });
}

template <typename T>
Var cross_entropy(Tape<T>& tape, Var prediction, Var target) {
  const auto& p = tape.value(prediction);
  const auto& y = tape.value(target);
  require_same_shape(p, y, "cross_entropy");
  const T eps = static_cast<T>(kCrossEntropyEpsilon);
  T total = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (y[i] != T(0)) total -= y[i] * std::log(p[i] + eps);
  Var out_var{tape.size()};
  return tape.push(Tensor<T>::scalar(total), tape.requires_grad(prediction), [=](Tape<T>& t) {
    const T g = t.grad(out_var)[0];
    const auto& pv = t.value(prediction);
    const auto& yv = t.value(target);
    auto& gp = t.grad(prediction);
    for (std::size_t i = 0; i < pv.size(); ++i) gp[i] -= g * yv[i] / (pv[i] + eps);
  });
}

template <typename T>
Var loss(Tape<T>& tape, LossKind kind, Var prediction, Var target) {
  switch (kind) {
    case LossKind::mae:
      return mae(tape, prediction, target);
    case LossKind::categorical_cross_entropy:
      return cross_entropy(tape, prediction, target);
  }
  throw UsageError("invalid loss kind");
}

}  // namespace ops

template <typename T>
T loss_eval(LossKind kind, const Tensor<T>& prediction, const Tensor<T>& target) {
  Tape<T> tape(nullptr, false);
  Var p = tape.constant(prediction);
  Var y = tape.constant(target);
  return tape.value(ops::loss(tape, kind, p, y))[0];
}

#define COAT_INSTANTIATE_OPS(T)                                                                 \
  template Var ops::conv2d_same<T>(Tape<T>&, Var, Var, Var);                                    \
  template Var ops::relu<T>(Tape<T>&, Var);                                                     \
  template Var ops::add<T>(Tape<T>&, Var, Var);                                                 \
  template Var ops::scale<T>(Tape<T>&, Var, T);                                                 \
  template Var ops::concat_channels<T>(Tape<T>&, Var, Var);                                     \
  template Var ops::concat<T>(Tape<T>&, const std::vector<Var>&);                               \
  template Var ops::self_attention<T>(Tape<T>&, Var, std::size_t);                              \
  template Var ops::gather_positions<T>(Tape<T>&, Var, const std::vector<GridPos>&);            \
  template Var ops::dense<T>(Tape<T>&, Var, Var, Var, Activation);                              \
  template Var ops::softmax<T>(Tape<T>&, Var);                                                  \
  template Var ops::sum<T>(Tape<T>&, Var);                                                      \
  template Var ops::sum_squares<T>(Tape<T>&, Var);                                              \
  template Var ops::mae<T>(Tape<T>&, Var, Var);                                                 \
  template Var ops::cross_entropy<T>(Tape<T>&, Var, Var);                                       \
  template Var ops::loss<T>(Tape<T>&, LossKind, Var, Var);                                      \
  template T loss_eval<T>(LossKind, const Tensor<T>&, const Tensor<T>&);

COAT_INSTANTIATE_OPS(float)
COAT_INSTANTIATE_OPS(double)

#undef COAT_INSTANTIATE_OPS

}  // namespace coat
