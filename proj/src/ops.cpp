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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "infmcs/error.hpp"
#include "infmcs/tensor.hpp"

namespace infmcs::ad {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MutMap = Eigen::Map<RowMatrix>;

MutMap view(std::vector<double>& v, std::size_t r, std::size_t c) {
  return MutMap(v.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw BadInput(std::string(op) + ": incompatible shapes " + shape_string(a.shape()) + " and " +
                 shape_string(b.shape()));
}

void require_defined(const char* op, const Tensor& t) {
  if (!t.defined()) throw BadInput(std::string(op) + ": undefined tensor");
}

void require_matrix(const char* op, const Tensor& t) {
  require_defined(op, t);
  if (t.rank() != 2) throw BadInput(std::string(op) + ": expected a 2-D tensor, got " + shape_string(t.shape()));
}

// Builds the result node; records the tape only when some input needs it.
Tensor make_result(const char* op, Shape shape, std::vector<double> value, std::vector<Tensor> inputs,
                   std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  node->op = op;
  bool needs = false;
  if (grad_enabled()) {
    for (const auto& t : inputs) needs = needs || t.requires_grad();
  }
  if (needs) {
    node->requires_grad = true;
    for (auto& t : inputs) node->inputs.push_back(t.shared());
    node->backward = std::move(backward_fn);
  }
  return Tensor(std::move(node));
}

bool wants(const Node& self, std::size_t k) { return self.inputs[k]->requires_grad; }
std::vector<double>& grad_of(Node& self, std::size_t k) { return self.inputs[k]->grad_buffer(); }

// `small` broadcasts over `big`: a trailing-dims match or a single element.
bool is_suffix(const Shape& small, const Shape& big) {
  if (shape_size(small) == 1) return true;
  if (small.size() > big.size()) return false;
  return std::equal(small.rbegin(), small.rend(), big.rbegin());
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix("matmul", a);
  require_matrix("matmul", b);
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  std::vector<double> out(n * m);
  view(out, n, m).noalias() = view(a.node()->value, n, k) * view(b.node()->value, k, m);
  return make_result("matmul", {n, m}, std::move(out), {a, b}, [n, k, m](Node& self) {
    auto g = view(self.grad, n, m);
    if (wants(self, 0)) {
      view(grad_of(self, 0), n, k).noalias() += g * view(self.inputs[1]->value, k, m).transpose();
    }
    if (wants(self, 1)) {
      view(grad_of(self, 1), k, m).noalias() += view(self.inputs[0]->value, n, k).transpose() * g;
    }
  });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  require_matrix("matmul_nt", a);
  require_matrix("matmul_nt", b);
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  std::vector<double> out(n * m);
  view(out, n, m).noalias() = view(a.node()->value, n, k) * view(b.node()->value, m, k).transpose();
  return make_result("matmul_nt", {n, m}, std::move(out), {a, b}, [n, k, m](Node& self) {
    auto g = view(self.grad, n, m);
    if (wants(self, 0)) view(grad_of(self, 0), n, k).noalias() += g * view(self.inputs[1]->value, m, k);
    if (wants(self, 1)) {
      view(grad_of(self, 1), m, k).noalias() += g.transpose() * view(self.inputs[0]->value, n, k);
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_matrix("transpose", a);
  const std::size_t n = a.rows(), m = a.cols();
  std::vector<double> out(n * m);
  view(out, m, n) = view(a.node()->value, n, m).transpose();
  return make_result("transpose", {m, n}, std::move(out), {a}, [n, m](Node& self) {
    view(grad_of(self, 0), n, m) += view(self.grad, m, n).transpose();
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_defined("add", a);
  require_defined("add", b);
  if (!is_suffix(b.shape(), a.shape())) shape_error("add", a, b);
  const std::size_t nb = b.size();
  std::vector<double> out(a.node()->value);
  const auto& bv = b.node()->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i % nb];
  return make_result("add", a.shape(), std::move(out), {a, b}, [nb](Node& self) {
    if (wants(self, 0)) {
      auto& ga = grad_of(self, 0);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i];
    }
    if (wants(self, 1)) {
      auto& gb = grad_of(self, 1);
      for (std::size_t i = 0; i < self.grad.size(); ++i) gb[i % nb] += self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_defined("mul", a);
  require_defined("mul", b);
  if (!is_suffix(b.shape(), a.shape())) shape_error("mul", a, b);
  const std::size_t nb = b.size();
  std::vector<double> out(a.node()->value);
  const auto& bv = b.node()->value;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i % nb];
  return make_result("mul", a.shape(), std::move(out), {a, b}, [nb](Node& self) {
    const auto& av = self.inputs[0]->value;
    const auto& bv = self.inputs[1]->value;
    if (wants(self, 0)) {
      auto& ga = grad_of(self, 0);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i] * bv[i % nb];
    }
    if (wants(self, 1)) {
      auto& gb = grad_of(self, 1);
      for (std::size_t i = 0; i < self.grad.size(); ++i) gb[i % nb] += self.grad[i] * av[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  require_defined("scale", a);
  std::vector<double> out(a.node()->value);
  for (auto& x : out) x *= factor;
  return make_result("scale", a.shape(), std::move(out), {a}, [factor](Node& self) {
    auto& ga = grad_of(self, 0);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i] * factor;
  });
}

Tensor scale(const Tensor& a, const Tensor& factor) {
  require_defined("scale", a);
  require_defined("scale", factor);
  if (factor.size() != 1) shape_error("scale", a, factor);
  return mul(a, factor);
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw BadInput("concat_cols: no inputs");
  const std::size_t n = (require_matrix("concat_cols", parts[0]), parts[0].rows());
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_matrix("concat_cols", p);
    if (p.rows() != n) shape_error("concat_cols", parts[0], p);
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<double> out(n * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    view(out, n, total).middleCols(offset, widths[k]) = view(parts[k].node()->value, n, widths[k]);
    offset += widths[k];
  }
  return make_result("concat_cols", {n, total}, std::move(out), {parts.begin(), parts.end()},
                     [n, total, widths](Node& self) {
                       std::size_t off = 0;
                       for (std::size_t k = 0; k < widths.size(); ++k) {
                         if (wants(self, k)) {
                           view(grad_of(self, k), n, widths[k]) +=
                               view(self.grad, n, total).middleCols(off, widths[k]);
                         }
                         off += widths[k];
                       }
                     });
}

Tensor row_gather(const Tensor& table, std::span<const std::size_t> index) {
  require_matrix("row_gather", table);
  if (index.empty()) throw BadInput("row_gather: empty index");
  const std::size_t c = table.cols();
  std::vector<double> out(index.size() * c);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= table.rows()) {
      throw BadInput("row_gather: row " + std::to_string(index[i]) + " out of range for table " +
                     shape_string(table.shape()));
    }
    std::copy_n(table.node()->value.begin() + static_cast<std::ptrdiff_t>(index[i] * c), c,
                out.begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return make_result("row_gather", {idx.size(), c}, std::move(out), {table}, [idx, c](Node& self) {
    auto& g = grad_of(self, 0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < c; ++j) g[idx[i] * c + j] += self.grad[i * c + j];
    }
  });
}

Tensor relu(const Tensor& a) {
  require_defined("relu", a);
  std::vector<double> out(a.node()->value);
  for (auto& x : out) x = x > 0.0 ? x : 0.0;
  return make_result("relu", a.shape(), std::move(out), {a}, [](Node& self) {
    auto& g = grad_of(self, 0);
    const auto& x = self.inputs[0]->value;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += x[i] > 0.0 ? self.grad[i] : 0.0;
  });
}

Tensor sigmoid(const Tensor& a) {
  require_defined("sigmoid", a);
  std::vector<double> out(a.node()->value);
  for (auto& x : out) x = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  return make_result("sigmoid", a.shape(), std::move(out), {a}, [](Node& self) {
    auto& g = grad_of(self, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double y = self.value[i];
      g[i] += self.grad[i] * y * (1.0 - y);
    }
  });
}

Tensor reciprocal(const Tensor& a) {
  require_defined("reciprocal", a);
  std::vector<double> out(a.node()->value);
  for (auto& x : out) {
    if (x == 0.0) throw NumericFailure("reciprocal of zero");
    x = 1.0 / x;
  }
  return make_result("reciprocal", a.shape(), std::move(out), {a}, [](Node& self) {
    auto& g = grad_of(self, 0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i] * self.value[i] * self.value[i];
  });
}

namespace {

// Row softmax of m * x; also returns the raw rows for the multiplier gradient.
std::vector<double> softmax_forward(const Tensor& x, double m) {
  const std::size_t n = x.rows(), c = x.cols();
  std::vector<double> out(x.node()->value);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.data() + i * c;
    double hi = -INFINITY;
    for (std::size_t j = 0; j < c; ++j) {
      row[j] *= m;
      hi = std::max(hi, row[j]);
    }
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      row[j] = std::exp(row[j] - hi);
      z += row[j];
    }
    for (std::size_t j = 0; j < c; ++j) row[j] /= z;
  }
  return out;
}

// d(loss)/d(m*x) for a row softmax with output y and upstream gradient g.
std::vector<double> softmax_input_grad(const Node& self, std::size_t n, std::size_t c) {
  std::vector<double> dz(n * c);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < c; ++j) dot += self.grad[i * c + j] * self.value[i * c + j];
    for (std::size_t j = 0; j < c; ++j) {
      dz[i * c + j] = self.value[i * c + j] * (self.grad[i * c + j] - dot);
    }
  }
  return dz;
}

}  // namespace

Tensor softmax_rows(const Tensor& x, double multiplier) {
  require_matrix("softmax_rows", x);
  const std::size_t n = x.rows(), c = x.cols();
  return make_result("softmax_rows", x.shape(), softmax_forward(x, multiplier), {x},
                     [n, c, multiplier](Node& self) {
                       auto dz = softmax_input_grad(self, n, c);
                       auto& g = grad_of(self, 0);
                       for (std::size_t i = 0; i < g.size(); ++i) g[i] += dz[i] * multiplier;
                     });
}

Tensor softmax_rows(const Tensor& x, const Tensor& multiplier) {
  require_matrix("softmax_rows", x);
  require_defined("softmax_rows", multiplier);
  if (multiplier.size() != 1) shape_error("softmax_rows", x, multiplier);
  const std::size_t n = x.rows(), c = x.cols();
  return make_result("softmax_rows", x.shape(), softmax_forward(x, multiplier.item()), {x, multiplier},
                     [n, c](Node& self) {
                       auto dz = softmax_input_grad(self, n, c);
                       const double m = self.inputs[1]->value[0];
                       const auto& xv = self.inputs[0]->value;
                       if (wants(self, 0)) {
                         auto& g = grad_of(self, 0);
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += dz[i] * m;
                       }
                       if (wants(self, 1)) {
                         double acc = 0.0;
                         for (std::size_t i = 0; i < dz.size(); ++i) acc += dz[i] * xv[i];
                         grad_of(self, 1)[0] += acc;
                       }
                     });
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  require_matrix("layer_norm", x);
  require_defined("layer_norm", gain);
  require_defined("layer_norm", bias);
  const std::size_t n = x.rows(), c = x.cols();
  if (gain.size() != c) shape_error("layer_norm", x, gain);
  if (bias.size() != c) shape_error("layer_norm", x, bias);
  std::vector<double> xhat(n * c), inv_std(n), out(n * c);
  const auto& xv = x.node()->value;
  const auto& gv = gain.node()->value;
  const auto& bv = bias.node()->value;
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < c; ++j) mu += xv[i * c + j];
    mu /= static_cast<double>(c);
    double var = 0.0;
    for (std::size_t j = 0; j < c; ++j) var += (xv[i * c + j] - mu) * (xv[i * c + j] - mu);
    var /= static_cast<double>(c);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < c; ++j) {
      xhat[i * c + j] = (xv[i * c + j] - mu) * inv_std[i];
      out[i * c + j] = xhat[i * c + j] * gv[j] + bv[j];
    }
  }
  return make_result("layer_norm", x.shape(), std::move(out), {x, gain, bias},
                     [n, c, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
                       const auto& gv = self.inputs[1]->value;
                       const auto& g = self.grad;
                       if (wants(self, 1)) {
                         auto& gg = grad_of(self, 1);
                         for (std::size_t i = 0; i < n * c; ++i) gg[i % c] += g[i] * xhat[i];
                       }
                       if (wants(self, 2)) {
                         auto& gb = grad_of(self, 2);
                         for (std::size_t i = 0; i < n * c; ++i) gb[i % c] += g[i];
                       }
                       if (wants(self, 0)) {
                         auto& gx = grad_of(self, 0);
                         const double inv_c = 1.0 / static_cast<double>(c);
                         for (std::size_t i = 0; i < n; ++i) {
                           double s1 = 0.0, s2 = 0.0;
                           for (std::size_t j = 0; j < c; ++j) {
                             const double dh = g[i * c + j] * gv[j];
                             s1 += dh;
                             s2 += dh * xhat[i * c + j];
                           }
                           for (std::size_t j = 0; j < c; ++j) {
                             const double dh = g[i * c + j] * gv[j];
                             gx[i * c + j] += inv_std[i] * (dh - inv_c * s1 - xhat[i * c + j] * inv_c * s2);
                           }
                         }
                       }
                     });
}

Tensor l2_normalize_rows(const Tensor& x) {
  require_matrix("l2_normalize_rows", x);
  const std::size_t n = x.rows(), c = x.cols();
  std::vector<double> out(x.node()->value), norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += out[i * c + j] * out[i * c + j];
    norms[i] = std::sqrt(s);
    if (norms[i] > 0.0) {
      for (std::size_t j = 0; j < c; ++j) out[i * c + j] /= norms[i];
    }
  }
  return make_result("l2_normalize_rows", x.shape(), std::move(out), {x},
                     [n, c, norms = std::move(norms)](Node& self) {
                       auto& gx = grad_of(self, 0);
                       for (std::size_t i = 0; i < n; ++i) {
                         if (norms[i] == 0.0) continue;
                         double dot = 0.0;
                         for (std::size_t j = 0; j < c; ++j) dot += self.grad[i * c + j] * self.value[i * c + j];
                         for (std::size_t j = 0; j < c; ++j) {
                           gx[i * c + j] += (self.grad[i * c + j] - self.value[i * c + j] * dot) / norms[i];
                         }
                       }
                     });
}

Tensor sparse_matmul(const SparseRows& w, const Tensor& x) {
  require_matrix("sparse_matmul", x);
  if (w.cols != x.rows() || w.offsets.size() != w.rows + 1 || w.columns.size() != w.weights.size() ||
      w.offsets.back() != w.columns.size()) {
    throw BadInput("sparse_matmul: sparse matrix " + std::to_string(w.rows) + "x" + std::to_string(w.cols) +
                   " does not match " + shape_string(x.shape()));
  }
  const std::size_t c = x.cols();
  const auto& xv = x.node()->value;
  std::vector<double> out(w.rows * c, 0.0);
  for (std::size_t i = 0; i < w.rows; ++i) {
    for (std::size_t e = w.offsets[i]; e < w.offsets[i + 1]; ++e) {
      const double wt = w.weights[e];
      const std::size_t src = w.columns[e];
      for (std::size_t j = 0; j < c; ++j) out[i * c + j] += wt * xv[src * c + j];
    }
  }
  return make_result("sparse_matmul", {w.rows, c}, std::move(out), {x}, [w, c](Node& self) {
    auto& gx = grad_of(self, 0);
    for (std::size_t i = 0; i < w.rows; ++i) {
      for (std::size_t e = w.offsets[i]; e < w.offsets[i + 1]; ++e) {
        const double wt = w.weights[e];
        const std::size_t src = w.columns[e];
        for (std::size_t j = 0; j < c; ++j) gx[src * c + j] += wt * self.grad[i * c + j];
      }
    }
  });
}

Tensor sum(const Tensor& a) {
  require_defined("sum", a);
  double s = 0.0;
  for (double v : a.values()) s += v;
  return make_result("sum", {1}, {s}, {a}, [](Node& self) {
    auto& g = grad_of(self, 0);
    for (auto& v : g) v += self.grad[0];
  });
}

Tensor mean(const Tensor& a) {
  require_defined("mean", a);
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
  require_defined("mse_loss", pred);
  require_defined("mse_loss", target);
  if (pred.size() != target.size()) shape_error("mse_loss", pred, target);
  const std::size_t n = pred.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred.values()[i] - target.values()[i];
    s += d * d;
  }
  return make_result("mse_loss", {1}, {s / static_cast<double>(n)}, {pred, target}, [n](Node& self) {
    const auto& p = self.inputs[0]->value;
    const auto& t = self.inputs[1]->value;
    const double k = 2.0 * self.grad[0] / static_cast<double>(n);
    if (wants(self, 0)) {
      auto& g = grad_of(self, 0);
      for (std::size_t i = 0; i < n; ++i) g[i] += k * (p[i] - t[i]);
    }
    if (wants(self, 1)) {
      auto& g = grad_of(self, 1);
      for (std::size_t i = 0; i < n; ++i) g[i] -= k * (p[i] - t[i]);
    }
  });
}

Tensor bce_loss(const Tensor& pred, const Tensor& target, double eps) {
  require_defined("bce_loss", pred);
  require_defined("bce_loss", target);
  if (pred.size() != target.size()) shape_error("bce_loss", pred, target);
  const std::size_t n = pred.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::clamp(pred.values()[i], eps, 1.0 - eps);
    const double t = target.values()[i];
    s -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
  }
  return make_result("bce_loss", {1}, {s / static_cast<double>(n)}, {pred, target}, [n, eps](Node& self) {
    const auto& pv = self.inputs[0]->value;
    const auto& tv = self.inputs[1]->value;
    const double k = self.grad[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool clamped = pv[i] < eps || pv[i] > 1.0 - eps;
      const double p = std::clamp(pv[i], eps, 1.0 - eps);
      if (wants(self, 0) && !clamped) grad_of(self, 0)[i] += k * (p - tv[i]) / (p * (1.0 - p));
      if (wants(self, 1)) grad_of(self, 1)[i] += k * (std::log(1.0 - p) - std::log(p));
    }
  });
}

}  // namespace infmcs::ad
