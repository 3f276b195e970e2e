#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "telab/ad/tensor.hpp"

// Differentiable primitives. Shape rules (r x c notation):
//   matmul      (m x k)(k x n) -> m x n
//   add/sub/mul (m x n, m x n) or (m x n, 1 x n) with the row broadcast
//               over the leading (row) dimension only
//   divide      (m x n, m x n) or (m x n, 1 x n)
//   concat      along rows (equal cols) or cols (equal rows)
//   slice       half-open range of rows or cols
//   reshape     any shape of equal size, row-major order preserved
//   reduce_sum  all -> 1x1, over_rows -> 1 x n, over_cols -> m x 1
//   reduce_max  all -> 1x1; gradient goes to the first maximal entry
//   embed_lookup table (V x d), ids -> len(ids) x d
// Mismatches throw ShapeError; bad ids throw ShapeError too.
namespace telab::ad {

enum class Axis { rows, cols };
enum class Reduce { all, over_rows, over_cols };

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor divide(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor concat(std::span<const Tensor> parts, Axis axis);
Tensor slice(const Tensor& a, Axis axis, std::size_t begin, std::size_t end);
Tensor reshape(const Tensor& a, Shape shape);
Tensor transpose(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor row_softmax(const Tensor& a);
// Per-row normalization followed by gain (1 x n) and bias (1 x n).
Tensor layer_norm(const Tensor& a, const Tensor& gain, const Tensor& bias, double eps = 1e-5);
Tensor reduce_sum(const Tensor& a, Reduce how = Reduce::all);
Tensor reduce_max(const Tensor& a);
Tensor embed_lookup(const Tensor& table, std::span<const std::size_t> ids);

// Affine map x W + b with b broadcast over rows.
inline Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  return add(matmul(x, w), b);
}

// Interleaved sin/cos code of a position; dim must be even and positive.
std::vector<double> sinusoidal_pe(std::size_t position, std::size_t dim);

}  // namespace telab::ad
