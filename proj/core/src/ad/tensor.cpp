#include "telab/ad/tensor.hpp"

#include <algorithm>
#include <unordered_set>

#include "telab/common/error.hpp"

namespace telab::ad {

namespace {
thread_local bool g_grad_enabled = true;

void check_size(const Shape& shape, std::size_t n) {
  if (shape.size() != n) {
    throw ShapeError("tensor of shape " + std::to_string(shape.rows) + "x" +
                     std::to_string(shape.cols) + " given " + std::to_string(n) + " values");
  }
}

// Post-order over nodes that require grad.
std::vector<detail::Node*> topo_order(detail::Node* root) {
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{root, 0}};
  visited.insert(root);
  while (!stack.empty()) {
    auto& [node, next_parent] = stack.back();
    if (next_parent < node->parents.size()) {
      detail::Node* p = node->parents[next_parent++].get();
      if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}
}  // namespace

Tensor Tensor::constant(Shape shape, std::vector<double> values) {
  check_size(shape, values.size());
  auto node = std::make_shared<detail::Node>();
  node->shape = shape;
  node->value = std::move(values);
  return Tensor(std::move(node));
}

Tensor Tensor::constant(Shape shape, double fill) {
  return constant(shape, std::vector<double>(shape.size(), fill));
}

Tensor Tensor::variable(Shape shape, std::vector<double> values) {
  Tensor t = constant(shape, std::move(values));
  t.node_->requires_grad = true;
  return t;
}

double Tensor::item() const {
  if (size() != 1) throw ShapeError("item() requires a 1x1 tensor");
  return node_->value[0];
}

void Tensor::set_requires_grad(bool on) {
  if (node_->op != OpKind::leaf) throw Error("requires_grad can only be toggled on leaves");
  node_->requires_grad = on;
}

std::span<double> Tensor::mutable_grad() {
  node_->ensure_grad();
  return node_->grad;
}

void Tensor::zero_grad() { std::fill(node_->grad.begin(), node_->grad.end(), 0.0); }

Tensor Tensor::detach() const { return constant(shape(), node_->value); }

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) throw ShapeError("backward() needs a scalar loss");
  detail::Node* root = loss.node().get();
  if (!root->requires_grad) return;
  const auto order = topo_order(root);
  for (detail::Node* n : order) {
    if (n->op != OpKind::leaf) n->grad.assign(n->value.size(), 0.0);
  }
  root->ensure_grad();
  root->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->backward) n->backward(*n);
  }
}

double min_kink_margin(const Tensor& t) {
  double margin = std::numeric_limits<double>::infinity();
  std::unordered_set<const detail::Node*> seen;
  std::vector<const detail::Node*> stack{t.node().get()};
  while (!stack.empty()) {
    const detail::Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    margin = std::min(margin, n->kink_margin);
    for (const auto& p : n->parents) stack.push_back(p.get());
  }
  return margin;
}

}  // namespace telab::ad
