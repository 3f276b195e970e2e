#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace telab::ad {

// Every tensor is a row-major matrix; scalars are 1x1 and vectors 1xN.
struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

enum class OpKind {
  leaf,
  matmul,
  add,
  sub,
  mul,
  scale,
  divide,
  concat,
  slice,
  reshape,
  relu,
  tanh,
  row_softmax,
  layer_norm,
  reduce_sum,
  reduce_max,
  embed_lookup,
  transpose,
};

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first needed
  bool requires_grad = false;
  OpKind op = OpKind::leaf;
  // Distance of the forward inputs from the nearest nondifferentiable
  // point (relu at 0, reduce_max ties); +inf for smooth ops.
  double kink_margin = std::numeric_limits<double>::infinity();
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into parents' grads.
  std::function<void(Node&)> backward;

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};

}  // namespace detail

// Handle to a node of a define-by-run reverse-mode graph. Copies share the
// node. A tensor requires grad when it is a trainable leaf or any of its
// inputs requires grad (and recording is enabled on this thread).
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Shape shape, std::vector<double> values);
  static Tensor constant(Shape shape, double fill = 0.0);
  static Tensor scalar(double v) { return constant({1, 1}, std::vector<double>{v}); }
  // Trainable leaf.
  static Tensor variable(Shape shape, std::vector<double> values);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rows() const { return node_->shape.rows; }
  std::size_t cols() const { return node_->shape.cols; }
  std::size_t size() const { return node_->value.size(); }

  std::span<const double> values() const { return node_->value; }
  // Direct access for optimizers and finite-difference probes.
  std::span<double> mutable_values() { return node_->value; }
  double at(std::size_t r, std::size_t c) const { return node_->value[r * cols() + c]; }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on);
  OpKind op() const { return node_->op; }

  // Empty span when no gradient has been accumulated.
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad();
  void zero_grad();

  // Copy of the values detached from any graph.
  Tensor detach() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<detail::Node> node_;
};

// Graph recording switch for the current thread.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Accumulates d(loss)/d(x) into every reachable tensor that requires grad,
// visiting nodes in reverse topological order. Leaf gradients accumulate
// across calls; intermediate gradients are recomputed. Throws ShapeError
// for a non-scalar loss.
void backward(const Tensor& loss);

// Smallest kink margin over the graph that produced `t`.
double min_kink_margin(const Tensor& t);

}  // namespace telab::ad
