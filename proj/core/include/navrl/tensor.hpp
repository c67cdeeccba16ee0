#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace navrl {

std::string shape_to_string(const std::vector<int>& shape);

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
struct TensorNode {
  std::vector<int> shape;
  std::vector<T> value;
  std::vector<T> grad;  // same length as value once backward touches the node
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(TensorNode&)> backward_fn;

  int64_t numel() const { return static_cast<int64_t>(value.size()); }
  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), T(0));
  }
};

// Value handle over a shared computation-graph node. Copies alias the same
// node. Graphs are DAGs of parent links; backward() walks them in reverse
// topological order. backward() re-zeroes the grads of every reachable
// node before accumulating, so each call yields the gradients of exactly
// that loss.
template <typename T>
class Tensor {
 public:
  std::shared_ptr<TensorNode<T>> node;

  Tensor() = default;
  explicit Tensor(std::shared_ptr<TensorNode<T>> n) : node(std::move(n)) {}

  static Tensor zeros(const std::vector<int>& shape, bool requires_grad = false) {
    return full(shape, T(0), requires_grad);
  }
  static Tensor full(const std::vector<int>& shape, T v, bool requires_grad = false) {
    auto n = std::make_shared<TensorNode<T>>();
    n->shape = shape;
    n->value.assign(shape_numel(shape), v);
    n->requires_grad = requires_grad;
    return Tensor(std::move(n));
  }
  static Tensor from_data(const std::vector<int>& shape, std::vector<T> data,
                          bool requires_grad = false) {
    if (static_cast<int64_t>(data.size()) != shape_numel(shape))
      throw std::invalid_argument("from_data: " + std::to_string(data.size()) +
                                  " values for shape " + shape_to_string(shape));
    auto n = std::make_shared<TensorNode<T>>();
    n->shape = shape;
    n->value = std::move(data);
    n->requires_grad = requires_grad;
    return Tensor(std::move(n));
  }
  static Tensor scalar(T v, bool requires_grad = false) {
    return full({1}, v, requires_grad);
  }

  bool defined() const { return node != nullptr; }
  const std::vector<int>& shape() const { return node->shape; }
  int64_t numel() const { return node->numel(); }
  bool requires_grad() const { return node->requires_grad; }

  std::vector<T>& values() { return node->value; }
  const std::vector<T>& values() const { return node->value; }
  // Grad buffer, zero-filled on first access.
  std::vector<T>& grads() {
    node->ensure_grad();
    return node->grad;
  }
  const std::vector<T>& grads() const {
    node->ensure_grad();
    return node->grad;
  }

  T item() const {
    if (numel() != 1)
      throw std::invalid_argument("item() on tensor of shape " + shape_to_string(shape()));
    return node->value[0];
  }

  void zero_grad() { node->grad.assign(node->value.size(), T(0)); }

  // Same values, fresh leaf, no graph linkage, no gradient flow.
  Tensor detach() const {
    auto n = std::make_shared<TensorNode<T>>();
    n->shape = node->shape;
    n->value = node->value;
    n->requires_grad = false;
    return Tensor(std::move(n));
  }

  void backward();

  static int64_t shape_numel(const std::vector<int>& shape) {
    int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
  }
};

template <typename T>
void Tensor<T>::backward() {
  if (numel() != 1)
    throw std::invalid_argument("backward() requires a scalar loss, got shape " +
                                shape_to_string(shape()));
  // Iterative post-order DFS for topological order.
  std::vector<TensorNode<T>*> topo;
  std::unordered_set<TensorNode<T>*> seen;
  std::vector<std::pair<TensorNode<T>*, size_t>> stack;
  stack.push_back({node.get(), 0});
  seen.insert(node.get());
  while (!stack.empty()) {
    auto& [n, idx] = stack.back();
    if (idx < n->parents.size()) {
      TensorNode<T>* p = n->parents[idx++].get();
      if (seen.insert(p).second) stack.push_back({p, 0});
    } else {
      topo.push_back(n);
      stack.pop_back();
    }
  }
  for (TensorNode<T>* n : topo) n->grad.assign(n->value.size(), T(0));
  node->grad[0] = T(1);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    if ((*it)->backward_fn && (*it)->requires_grad) (*it)->backward_fn(**it);
  }
}

namespace detail {
inline thread_local bool grad_enabled = true;
}  // namespace detail

// Suspends graph construction for its scope: ops produce constant nodes with
// no parent links, so forward-only passes (targets, evaluation) cost no
// backward bookkeeping and free intermediates as they go.
class NoGradGuard {
 public:
  NoGradGuard() : prev_(detail::grad_enabled) { detail::grad_enabled = false; }
  ~NoGradGuard() { detail::grad_enabled = prev_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

inline bool grad_mode_enabled() { return detail::grad_enabled; }

namespace detail {

template <typename T>
std::shared_ptr<TensorNode<T>> make_node(std::vector<int> shape,
                                         std::vector<std::shared_ptr<TensorNode<T>>> parents) {
  auto n = std::make_shared<TensorNode<T>>();
  n->shape = std::move(shape);
  n->value.resize(Tensor<T>::shape_numel(n->shape));
  bool req = false;
  if (grad_enabled) {
    for (const auto& p : parents) req = req || p->requires_grad;
  }
  n->requires_grad = req;
  // Nodes that need no gradients drop their parent links: target-network
  // and evaluation passes then free their inputs eagerly and backward
  // never visits them.
  if (req) n->parents = std::move(parents);
  return n;
}

template <typename T>
void check_same_shape(const char* op, const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                shape_to_string(a.shape()) + " vs " +
                                shape_to_string(b.shape()));
}

}  // namespace detail

// ---- elementwise ----

template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> minimum(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> add_scalar(const Tensor<T>& a, T c);
template <typename T> Tensor<T> mul_scalar(const Tensor<T>& a, T c);
template <typename T> Tensor<T> neg(const Tensor<T>& a) { return mul_scalar(a, T(-1)); }
template <typename T> Tensor<T> relu(const Tensor<T>& a);
template <typename T> Tensor<T> tanh_op(const Tensor<T>& a);
template <typename T> Tensor<T> exp_op(const Tensor<T>& a);
template <typename T> Tensor<T> log_op(const Tensor<T>& a);
template <typename T> Tensor<T> clamp_op(const Tensor<T>& a, T lo, T hi);
// Scalar tensor s (shape {1}) times every element of x.
template <typename T> Tensor<T> scalar_mul(const Tensor<T>& s, const Tensor<T>& x);

// ---- shape ----

template <typename T> Tensor<T> reshape(const Tensor<T>& a, std::vector<int> shape);
template <typename T> Tensor<T> slice_cols(const Tensor<T>& a, int c0, int c1);
template <typename T> Tensor<T> concat_cols(const Tensor<T>& a, const Tensor<T>& b);

// ---- reductions ----

template <typename T> Tensor<T> sum(const Tensor<T>& a);
template <typename T> Tensor<T> mean(const Tensor<T>& a);
// Row sums of a [B, D] tensor -> [B].
template <typename T> Tensor<T> sum_last(const Tensor<T>& a);

// ---- layers ----

// x [B, I], w [O, I], b [O] -> [B, O]
template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b);

// x [B, C, H, W], w [F, C, KH, KW], b [F] -> [B, F, H-KH+1, W-KW+1]
// (stride 1, valid padding, im2col + GEMM)
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b);

// x [B, D], gamma [D], beta [D]; normalizes each row to zero mean / unit
// variance (population variance + eps), then scales and shifts.
template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                     T eps = T(1e-5));

// mu + exp(log_sigma) * noise, composed from primitive ops so gradients
// flow into mu and log_sigma; noise is a constant tensor.
template <typename T>
Tensor<T> reparam_gaussian_sample(const Tensor<T>& mu, const Tensor<T>& log_sigma,
                                  const Tensor<T>& noise) {
  return add(mu, mul(exp_op(log_sigma), noise));
}

}  // namespace navrl

#include "navrl/tensor_ops.inl"
