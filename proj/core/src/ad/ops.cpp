#include "telab/ad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "telab/common/error.hpp"

namespace telab::ad {

namespace {

using detail::Node;
using BackwardFn = std::function<void(Node&)>;

std::string dims(const Shape& s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

[[noreturn]] void mismatch(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + dims(a) + " and " + dims(b));
}

Tensor record(Shape shape, std::vector<double> value, OpKind op,
              std::initializer_list<const Tensor*> inputs, BackwardFn fn,
              double kink_margin = std::numeric_limits<double>::infinity()) {
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value = std::move(value);
  node->op = op;
  if (grad_enabled()) {
    bool any = false;
    for (const Tensor* in : inputs) any = any || in->requires_grad();
    if (any) {
      node->requires_grad = true;
      node->kink_margin = kink_margin;
      for (const Tensor* in : inputs) node->parents.push_back(in->node());
      node->backward = std::move(fn);
    }
  }
  return Tensor(std::move(node));
}

Tensor record_multi(Shape shape, std::vector<double> value, OpKind op,
                    std::span<const Tensor> inputs, BackwardFn fn) {
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value = std::move(value);
  node->op = op;
  if (grad_enabled()) {
    bool any = false;
    for (const Tensor& in : inputs) any = any || in.requires_grad();
    if (any) {
      node->requires_grad = true;
      for (const Tensor& in : inputs) node->parents.push_back(in.node());
      node->backward = std::move(fn);
    }
  }
  return Tensor(std::move(node));
}

// Gradient sink of an input, or nullptr when it does not need one.
double* sink(Node* p) {
  if (!p->requires_grad) return nullptr;
  p->ensure_grad();
  return p->grad.data();
}

// True when b is broadcast over a's rows; throws unless shapes agree.
bool broadcast_rows(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return false;
  if (b.rows() == 1 && b.cols() == a.cols()) return true;
  mismatch(op, a.shape(), b.shape());
}

enum class Elementwise { add, sub, mul, div };

Tensor elementwise(const char* name, OpKind kind, Elementwise f, const Tensor& a,
                   const Tensor& b) {
  const bool bc = broadcast_rows(name, a, b);
  const std::size_t n = a.size();
  const std::size_t cols = a.cols();
  const auto av = a.values();
  const auto bv = b.values();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = av[i];
    const double y = bv[bc ? i % cols : i];
    switch (f) {
      case Elementwise::add: out[i] = x + y; break;
      case Elementwise::sub: out[i] = x - y; break;
      case Elementwise::mul: out[i] = x * y; break;
      case Elementwise::div: out[i] = x / y; break;
    }
  }
  Node* pa = a.node().get();
  Node* pb = b.node().get();
  return record(a.shape(), std::move(out), kind, {&a, &b}, [pa, pb, bc, cols, f](Node& self) {
    double* ga = sink(pa);
    double* gb = sink(pb);
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double g = self.grad[i];
      const std::size_t j = bc ? i % cols : i;
      const double x = pa->value[i];
      const double y = pb->value[j];
      switch (f) {
        case Elementwise::add:
          if (ga) ga[i] += g;
          if (gb) gb[j] += g;
          break;
        case Elementwise::sub:
          if (ga) ga[i] += g;
          if (gb) gb[j] -= g;
          break;
        case Elementwise::mul:
          if (ga) ga[i] += g * y;
          if (gb) gb[j] += g * x;
          break;
        case Elementwise::div:
          if (ga) ga[i] += g / y;
          if (gb) gb[j] -= g * x / (y * y);
          break;
      }
    }
  });
}

// C += A * B for row-major A (m x k), B (k x n).
void gemm_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
              std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) mismatch("matmul", a.shape(), b.shape());
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> out(m * n, 0.0);
  gemm_acc(a.values().data(), b.values().data(), out.data(), m, k, n);
  Node* pa = a.node().get();
  Node* pb = b.node().get();
  return record({m, n}, std::move(out), OpKind::matmul, {&a, &b}, [pa, pb, m, k, n](Node& self) {
    const double* g = self.grad.data();
    if (double* ga = sink(pa)) {
      // dA = G B^T
      const double* bv = pb->value.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * bv[p * n + j];
          ga[i * k + p] += s;
        }
      }
    }
    if (double* gb = sink(pb)) {
      // dB = A^T G
      const double* av = pa->value.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = av[i * k + p];
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += aip * g[i * n + j];
        }
      }
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  return elementwise("add", OpKind::add, Elementwise::add, a, b);
}
Tensor sub(const Tensor& a, const Tensor& b) {
  return elementwise("sub", OpKind::sub, Elementwise::sub, a, b);
}
Tensor mul(const Tensor& a, const Tensor& b) {
  return elementwise("mul", OpKind::mul, Elementwise::mul, a, b);
}
Tensor divide(const Tensor& a, const Tensor& b) {
  return elementwise("divide", OpKind::divide, Elementwise::div, a, b);
}

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= factor;
  Node* pa = a.node().get();
  return record(a.shape(), std::move(out), OpKind::scale, {&a}, [pa, factor](Node& self) {
    if (double* ga = sink(pa)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) ga[i] += factor * self.grad[i];
    }
  });
}

Tensor concat(std::span<const Tensor> parts, Axis axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  Shape out_shape = parts.front().shape();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const Shape& s = parts[i].shape();
    if (axis == Axis::rows) {
      if (s.cols != out_shape.cols) mismatch("concat", out_shape, s);
      out_shape.rows += s.rows;
    } else {
      if (s.rows != out_shape.rows) mismatch("concat", out_shape, s);
      out_shape.cols += s.cols;
    }
  }
  std::vector<double> out(out_shape.size());
  std::vector<Node*> nodes;
  std::size_t offset = 0;  // row offset or column offset
  for (const Tensor& t : parts) {
    nodes.push_back(t.node().get());
    const auto v = t.values();
    if (axis == Axis::rows) {
      std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(offset * out_shape.cols));
      offset += t.rows();
    } else {
      for (std::size_t r = 0; r < t.rows(); ++r) {
        std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(r * t.cols()), t.cols(),
                    out.begin() + static_cast<std::ptrdiff_t>(r * out_shape.cols + offset));
      }
      offset += t.cols();
    }
  }
  return record_multi(out_shape, std::move(out), OpKind::concat, parts,
                      [nodes, axis, out_shape](Node& self) {
                        std::size_t off = 0;
                        for (Node* p : nodes) {
                          double* gp = sink(p);
                          const Shape s = p->shape;
                          if (gp) {
                            if (axis == Axis::rows) {
                              const double* g = self.grad.data() + off * out_shape.cols;
                              for (std::size_t i = 0; i < s.size(); ++i) gp[i] += g[i];
                            } else {
                              for (std::size_t r = 0; r < s.rows; ++r) {
                                const double* g = self.grad.data() + r * out_shape.cols + off;
                                for (std::size_t c = 0; c < s.cols; ++c) gp[r * s.cols + c] += g[c];
                              }
                            }
                          }
                          off += axis == Axis::rows ? s.rows : s.cols;
                        }
                      });
}

Tensor slice(const Tensor& a, Axis axis, std::size_t begin, std::size_t end) {
  const std::size_t extent = axis == Axis::rows ? a.rows() : a.cols();
  if (begin > end || end > extent) {
    throw ShapeError("slice [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") out of range for " + dims(a.shape()));
  }
  const std::size_t cols = a.cols();
  const Shape out_shape = axis == Axis::rows ? Shape{end - begin, cols} : Shape{a.rows(), end - begin};
  std::vector<double> out(out_shape.size());
  const auto v = a.values();
  for (std::size_t r = 0; r < out_shape.rows; ++r) {
    for (std::size_t c = 0; c < out_shape.cols; ++c) {
      const std::size_t src = axis == Axis::rows ? (r + begin) * cols + c : r * cols + c + begin;
      out[r * out_shape.cols + c] = v[src];
    }
  }
  Node* pa = a.node().get();
  return record(out_shape, std::move(out), OpKind::slice, {&a},
                [pa, axis, begin, cols, out_shape](Node& self) {
                  double* ga = sink(pa);
                  if (!ga) return;
                  for (std::size_t r = 0; r < out_shape.rows; ++r) {
                    for (std::size_t c = 0; c < out_shape.cols; ++c) {
                      const std::size_t dst =
                          axis == Axis::rows ? (r + begin) * cols + c : r * cols + c + begin;
                      ga[dst] += self.grad[r * out_shape.cols + c];
                    }
                  }
                });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape.size() != a.size()) mismatch("reshape", a.shape(), shape);
  std::vector<double> out(a.values().begin(), a.values().end());
  Node* pa = a.node().get();
  return record(shape, std::move(out), OpKind::reshape, {&a}, [pa](Node& self) {
    if (double* ga = sink(pa)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) ga[i] += self.grad[i];
    }
  });
}

Tensor transpose(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(m * n);
  const auto v = a.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = v[i * n + j];
  Node* pa = a.node().get();
  return record({n, m}, std::move(out), OpKind::transpose, {&a}, [pa, m, n](Node& self) {
    if (double* ga = sink(pa)) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += self.grad[j * m + i];
    }
  });
}

Tensor relu(const Tensor& a) {
  std::vector<double> out(a.size());
  double margin = std::numeric_limits<double>::infinity();
  const auto v = a.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] > 0.0 ? v[i] : 0.0;
    margin = std::min(margin, std::abs(v[i]));
  }
  Node* pa = a.node().get();
  return record(a.shape(), std::move(out), OpKind::relu, {&a}, [pa](Node& self) {
    if (double* ga = sink(pa)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        if (pa->value[i] > 0.0) ga[i] += self.grad[i];
      }
    }
  }, margin);
}

Tensor tanh(const Tensor& a) {
  std::vector<double> out(a.size());
  const auto v = a.values();
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
  Node* pa = a.node().get();
  return record(a.shape(), std::move(out), OpKind::tanh, {&a}, [pa](Node& self) {
    if (double* ga = sink(pa)) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        const double y = self.value[i];
        ga[i] += self.grad[i] * (1.0 - y * y);
      }
    }
  });
}

Tensor row_softmax(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<double> out(m * n);
  const auto v = a.values();
  for (std::size_t r = 0; r < m; ++r) {
    const double* x = v.data() + r * n;
    double* y = out.data() + r * n;
    const double mx = *std::max_element(x, x + n);
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      y[c] = std::exp(x[c] - mx);
      sum += y[c];
    }
    for (std::size_t c = 0; c < n; ++c) y[c] /= sum;
  }
  Node* pa = a.node().get();
  return record(a.shape(), std::move(out), OpKind::row_softmax, {&a}, [pa, m, n](Node& self) {
    double* ga = sink(pa);
    if (!ga) return;
    for (std::size_t r = 0; r < m; ++r) {
      const double* y = self.value.data() + r * n;
      const double* g = self.grad.data() + r * n;
      double dot = 0.0;
      for (std::size_t c = 0; c < n; ++c) dot += g[c] * y[c];
      for (std::size_t c = 0; c < n; ++c) ga[r * n + c] += y[c] * (g[c] - dot);
    }
  });
}

Tensor layer_norm(const Tensor& a, const Tensor& gain, const Tensor& bias, double eps) {
  const std::size_t m = a.rows(), n = a.cols();
  if (gain.rows() != 1 || gain.cols() != n) mismatch("layer_norm", a.shape(), gain.shape());
  if (bias.rows() != 1 || bias.cols() != n) mismatch("layer_norm", a.shape(), bias.shape());
  std::vector<double> xhat(m * n);
  std::vector<double> inv_std(m);
  std::vector<double> out(m * n);
  const auto v = a.values();
  const auto gv = gain.values();
  const auto bv = bias.values();
  for (std::size_t r = 0; r < m; ++r) {
    const double* x = v.data() + r * n;
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += x[c];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t c = 0; c < n; ++c) var += (x[c] - mean) * (x[c] - mean);
    var /= static_cast<double>(n);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < n; ++c) {
      xhat[r * n + c] = (x[c] - mean) * inv_std[r];
      out[r * n + c] = xhat[r * n + c] * gv[c] + bv[c];
    }
  }
  Node* pa = a.node().get();
  Node* pg = gain.node().get();
  Node* pb = bias.node().get();
  return record(a.shape(), std::move(out), OpKind::layer_norm, {&a, &gain, &bias},
                [pa, pg, pb, m, n, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
                  double* ga = sink(pa);
                  double* gg = sink(pg);
                  double* gb = sink(pb);
                  const double inv_n = 1.0 / static_cast<double>(n);
                  for (std::size_t r = 0; r < m; ++r) {
                    const double* g = self.grad.data() + r * n;
                    const double* xh = xhat.data() + r * n;
                    double mean_d = 0.0, mean_dx = 0.0;
                    for (std::size_t c = 0; c < n; ++c) {
                      const double d = g[c] * pg->value[c];
                      mean_d += d;
                      mean_dx += d * xh[c];
                      if (gg) gg[c] += g[c] * xh[c];
                      if (gb) gb[c] += g[c];
                    }
                    mean_d *= inv_n;
                    mean_dx *= inv_n;
                    if (ga) {
                      for (std::size_t c = 0; c < n; ++c) {
                        const double d = g[c] * pg->value[c];
                        ga[r * n + c] += inv_std[r] * (d - mean_d - xh[c] * mean_dx);
                      }
                    }
                  }
                });
}

Tensor reduce_sum(const Tensor& a, Reduce how) {
  const std::size_t m = a.rows(), n = a.cols();
  const auto v = a.values();
  Shape shape;
  std::vector<double> out;
  switch (how) {
    case Reduce::all:
      shape = {1, 1};
      out.assign(1, 0.0);
      for (double x : v) out[0] += x;
      break;
    case Reduce::over_rows:
      shape = {1, n};
      out.assign(n, 0.0);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) out[c] += v[r * n + c];
      break;
    case Reduce::over_cols:
      shape = {m, 1};
      out.assign(m, 0.0);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) out[r] += v[r * n + c];
      break;
  }
  Node* pa = a.node().get();
  return record(shape, std::move(out), OpKind::reduce_sum, {&a}, [pa, how, m, n](Node& self) {
    double* ga = sink(pa);
    if (!ga) return;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const double g = how == Reduce::all       ? self.grad[0]
                         : how == Reduce::over_rows ? self.grad[c]
                                                    : self.grad[r];
        ga[r * n + c] += g;
      }
    }
  });
}

Tensor reduce_max(const Tensor& a) {
  const auto v = a.values();
  if (v.empty()) throw ShapeError("reduce_max of an empty tensor");
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[arg]) arg = i;
  }
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != arg) margin = std::min(margin, v[arg] - v[i]);
  }
  Node* pa = a.node().get();
  return record({1, 1}, {v[arg]}, OpKind::reduce_max, {&a}, [pa, arg](Node& self) {
    if (double* ga = sink(pa)) ga[arg] += self.grad[0];
  }, margin);
}

Tensor embed_lookup(const Tensor& table, std::span<const std::size_t> ids) {
  const std::size_t d = table.cols();
  std::vector<double> out(ids.size() * d);
  const auto v = table.values();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= table.rows()) {
      throw ShapeError("embed_lookup: id " + std::to_string(ids[i]) + " outside table of " +
                       std::to_string(table.rows()) + " rows");
    }
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(ids[i] * d), d,
                out.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  Node* pt = table.node().get();
  std::vector<std::size_t> id_copy(ids.begin(), ids.end());
  return record({ids.size(), d}, std::move(out), OpKind::embed_lookup, {&table},
                [pt, d, id_copy = std::move(id_copy)](Node& self) {
                  double* gt = sink(pt);
                  if (!gt) return;
                  for (std::size_t i = 0; i < id_copy.size(); ++i)
                    for (std::size_t c = 0; c < d; ++c) gt[id_copy[i] * d + c] += self.grad[i * d + c];
                });
}

std::vector<double> sinusoidal_pe(std::size_t position, std::size_t dim) {
  if (dim == 0 || dim % 2 != 0) {
    throw ShapeError("sinusoidal_pe needs an even positive dimension, got " + std::to_string(dim));
  }
  std::vector<double> pe(dim);
  const double pos = static_cast<double>(position);
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const double freq = std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(dim));
    pe[2 * i] = std::sin(pos / freq);
    pe[2 * i + 1] = std::cos(pos / freq);
  }
  return pe;
}

}  // namespace telab::ad
