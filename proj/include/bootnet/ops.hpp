#pragma once

#include "bootnet/graph.hpp"
#include "bootnet/tensor.hpp"

namespace bootnet {

// ---- value-level math (no graph) ----

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor relu(const Tensor& x);
/// Row-wise x / max(||x||_2, eps); a 1-d tensor counts as a single row.
Tensor l2_normalize(const Tensor& x, double eps = 1e-12);
/// Row-wise stabilized softmax.
Tensor softmax_rows(const Tensor& logits);
/// Mean over rows of -sum_c y_c log softmax(logits)_c. Validates that
/// every onehot row is exactly one 1 and zeros elsewhere.
double cross_entropy(const Tensor& logits, const Tensor& onehot);
Tensor one_hot(const std::vector<std::uint32_t>& labels, std::size_t num_classes);

// ---- graph ops (differentiable unless noted) ----

NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);  // elementwise
/// k * a + c, elementwise with scalar constants.
NodePtr affine(const NodePtr& a, double k, double c);
/// a[BxN] + row vector b[N] broadcast over rows.
NodePtr add_rowvec(const NodePtr& a, const NodePtr& b);
NodePtr matmul(const NodePtr& a, const NodePtr& b);
NodePtr relu(const NodePtr& x);
NodePtr sum(const NodePtr& x);  // scalar
NodePtr l2_normalize_rows(const NodePtr& x, double eps = 1e-12);
/// Row-wise dot product of two BxD tensors -> [B].
NodePtr row_dot(const NodePtr& a, const NodePtr& b);
/// Scalar cross-entropy against a constant one-hot target.
NodePtr cross_entropy_onehot(const NodePtr& logits, const Tensor& onehot);
/// Gradient barrier: forwards the value, severs the graph.
NodePtr stop_grad(const NodePtr& x);

}  // namespace bootnet
