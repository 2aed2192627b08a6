// Copyright 2026 The infmcs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace infmcs::ad {

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);
std::size_t shape_size(const Shape& shape);

/// One value on the tape. Non-leaf nodes keep their inputs alive and know how
/// to push their gradient back into them.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated lazily, same length as value
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward;

  std::vector<double>& grad_buffer() {
    if (grad.empty()) grad.assign(value.size(), 0.0);
    return grad;
  }
};

/// Dense row-major float64 tensor with reference semantics: copies share the
/// underlying node, so parameters can be held by both a model and an
/// optimizer.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t size() const { return node_->value.size(); }
  std::size_t rows() const;  // leading extent of a 2-D tensor
  std::size_t cols() const;  // trailing extent

  std::span<const double> values() const { return node_->value; }
  std::span<double> mutable_values() { return node_->value; }
  double item() const;
  double at(std::size_t i, std::size_t j) const { return node_->value[i * cols() + j]; }

  /// Empty span when no gradient has reached this tensor.
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->grad_buffer(); }
  void zero_grad() { node_->grad.clear(); }

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool v) { node_->requires_grad = v; }

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& shared() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

/// Seeds d(loss)/d(loss) = 1 and runs every recorded backward function once,
/// in reverse topological order. Gradients accumulate (+=).
/// Returns the number of nodes visited.
std::size_t backward(const Tensor& loss);

/// While alive, new operations record no tape (inference mode).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

/// Row-compressed sparse weights, used for fixed graph aggregation.
struct SparseRows {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> columns;
  std::vector<double> weights;
};

// ---------------------------------------------------------------------------
// Operations. Shape mismatches throw infmcs::Error naming the op and shapes.

Tensor matmul(const Tensor& a, const Tensor& b);
/// a * b^T without materialising the transpose.
Tensor matmul_nt(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
/// Elementwise sum; `b` may broadcast over the leading dimensions of `a`
/// (its shape must be a suffix of a's shape) or be a single element.
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
/// a multiplied by a one-element tensor.
Tensor scale(const Tensor& a, const Tensor& factor);
/// Concatenation along the last axis of 2-D tensors with equal row counts.
Tensor concat_cols(std::span<const Tensor> parts);
/// Rows of `table` picked by `index` (embedding lookup).
Tensor row_gather(const Tensor& table, std::span<const std::size_t> index);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor reciprocal(const Tensor& a);
/// Row-wise softmax of (multiplier * x).
Tensor softmax_rows(const Tensor& x, double multiplier = 1.0);
Tensor softmax_rows(const Tensor& x, const Tensor& multiplier);
/// Row-wise (x - mean) / sqrt(var + eps) * gain + bias.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);
/// Rows scaled to unit L2 norm; all-zero rows stay zero.
Tensor l2_normalize_rows(const Tensor& x);
/// weights * x for a fixed sparse matrix.
Tensor sparse_matmul(const SparseRows& weights, const Tensor& x);
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
/// mean((pred - target)^2)
Tensor mse_loss(const Tensor& pred, const Tensor& target);
/// mean binary cross-entropy with predictions clamped to [eps, 1 - eps].
Tensor bce_loss(const Tensor& pred, const Tensor& target, double eps = 1e-7);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator*(const Tensor& a, double s) { return scale(a, s); }

// ---------------------------------------------------------------------------

/// Compares backprop against central differences for `fn` at `inputs`. The
/// output is projected onto fixed random weights to get a scalar. Returns the
/// largest |analytic - numeric| / max(|analytic|, |numeric|, floor).
double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& fn,
                  const std::vector<Tensor>& inputs, double epsilon = 1e-4,
                  std::uint64_t seed = 0, double floor = 1e-6);

/// Uniform(-scale, scale) and normal(0, stddev) helpers for tests and init.
Tensor random_uniform(Shape shape, double scale, std::uint64_t seed, bool requires_grad = false);
Tensor random_normal(Shape shape, double stddev, std::uint64_t seed, bool requires_grad = false);

}  // namespace infmcs::ad
