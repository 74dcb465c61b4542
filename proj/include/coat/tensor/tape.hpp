#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coat/tensor/param_store.hpp"
#include "coat/tensor/tensor.hpp"

namespace coat {

/// Handle to a node recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

/// Records one forward pass for reverse-mode differentiation.
///
/// Nodes are appended in evaluation order, so the node list is a topological
/// order of the graph and the backward sweep is a single reverse scan.
/// Node values have stable addresses for the tape's lifetime. Parameter
/// nodes reference the ParamStore tensors without copying; the store must
/// outlive the tape and stay unmodified while it is alive.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&)>;

  explicit Tape(const ParamStore<T>* params = nullptr, bool record = true) : params_(params), record_(record) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }

  Var constant(Tensor<T> value) {
    nodes_.push_back(Node{std::move(value), nullptr, {}, false, {}, {}});
    return Var{nodes_.size() - 1};
  }

  /// Leaf bound to a named parameter of the tape's ParamStore. Repeated
  /// requests for the same name return the same node.
  Var param(const std::string& name) {
    if (!params_) throw ContractError("tape has no parameter store");
    if (auto it = param_nodes_.find(name); it != param_nodes_.end()) return it->second;
    const bool grad = record_ && params_->trainable(name);
    nodes_.push_back(Node{{}, &params_->at(name), {}, grad, {}, name});
    Var v{nodes_.size() - 1};
    param_nodes_.emplace(name, v);
    return v;
  }

  /// Appends the result of an op. `fn` runs during backward once the
  /// node's gradient is complete; it is dropped when nothing needs it.
  Var push(Tensor<T> value, bool requires_grad, BackwardFn fn) {
    const bool grad = record_ && requires_grad;
    nodes_.push_back(Node{std::move(value), nullptr, {}, grad, grad ? std::move(fn) : BackwardFn{}, {}});
    return Var{nodes_.size() - 1};
  }

  const Tensor<T>& value(Var v) const {
    const Node& n = nodes_.at(v.id);
    return n.ref ? *n.ref : n.owned;
  }

  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }

  /// Gradient buffer of `v`, zero-initialised on first access.
  Tensor<T>& grad(Var v) {
    Node& n = nodes_.at(v.id);
    if (n.grad.shape() != value(v).shape()) n.grad = Tensor<T>(value(v).shape());
    return n.grad;
  }

  bool has_grad(Var v) const { return !nodes_.at(v.id).grad.empty(); }

  std::size_t size() const { return nodes_.size(); }

  /// dLoss/dParam for every trainable parameter of the store; parameters
  /// the loss does not depend on get zero gradients.
  Gradients<T> backward(Var loss) {
    if (value(loss).size() != 1)
      throw ContractError("backward requires a scalar loss, got shape " + value(loss).shape().str());
    if (!record_) throw ContractError("backward on a tape that did not record");

    grad(loss)[0] = T(1);
    for (std::size_t i = loss.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (n.backward && !n.grad.empty()) n.backward(*this);
    }

    Gradients<T> out;
    if (!params_) return out;
    for (const auto& [name, entry] : *params_) {
      if (!entry.trainable) continue;
      auto it = param_nodes_.find(name);
      if (it != param_nodes_.end() && has_grad(it->second))
        out.emplace(name, nodes_[it->second.id].grad);
      else
        out.emplace(name, Tensor<T>(entry.value.shape()));
    }
    return out;
  }

 private:
  struct Node {
    Tensor<T> owned;
    const Tensor<T>* ref;
    Tensor<T> grad;
    bool requires_grad;
    BackwardFn backward;
    std::string param_name;
  };

  const ParamStore<T>* params_;
  bool record_;
  std::deque<Node> nodes_;
  std::unordered_map<std::string, Var> param_nodes_;
};

}  // namespace coat
