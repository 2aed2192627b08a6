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

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "infmcs/dataset.hpp"
#include "infmcs/gradient_suite.hpp"
#include "infmcs/model.hpp"

namespace infmcs {

namespace {

using ad::Tensor;
using Fn = std::function<Tensor(const std::vector<Tensor>&)>;

// Uniform in [lo, hi], nudged away from `avoid` so finite differences never
// straddle a kink.
Tensor random_input(ad::Shape shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0,
                    std::optional<double> avoid = std::nullopt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(ad::shape_size(shape));
  for (auto& x : v) {
    x = dist(rng);
    if (avoid && std::abs(x - *avoid) < 0.05) x = *avoid + (x < *avoid ? -0.05 : 0.05);
  }
  return Tensor::from(std::move(shape), std::move(v), true);
}

struct OpCase {
  std::string name;
  std::function<std::pair<Fn, std::vector<Tensor>>(std::uint64_t)> make;
};

std::vector<OpCase> op_cases() {
  std::vector<OpCase> cases;
  auto add_case = [&](std::string name, auto make) { cases.push_back({std::move(name), make}); };
  add_case("matmul", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::matmul(x[0], x[1]); }),
                     std::vector{random_input({3, 4}, s), random_input({4, 2}, s + 1)}};
  });
  add_case("matmul_nt", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::matmul_nt(x[0], x[1]); }),
                     std::vector{random_input({3, 4}, s), random_input({5, 4}, s + 1)}};
  });
  add_case("transpose", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::transpose(x[0]); }), std::vector{random_input({3, 5}, s)}};
  });
  add_case("add_broadcast", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::add(x[0], x[1]); }),
                     std::vector{random_input({4, 3}, s), random_input({3}, s + 1)}};
  });
  add_case("mul", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::mul(x[0], x[1]); }),
                     std::vector{random_input({4, 3}, s), random_input({4, 3}, s + 1)}};
  });
  add_case("scale", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::scale(x[0], -1.7); }), std::vector{random_input({3, 3}, s)}};
  });
  add_case("scale_tensor", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::scale(x[0], x[1]); }),
                     std::vector{random_input({3, 3}, s), random_input({1}, s + 1)}};
  });
  add_case("concat_cols", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::concat_cols(std::span<const Tensor>(x)); }),
                     std::vector{random_input({3, 2}, s), random_input({3, 4}, s + 1)}};
  });
  add_case("row_gather", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) {
                       const std::size_t idx[] = {2, 0, 2, 3};
                       return ad::row_gather(x[0], idx);
                     }),
                     std::vector{random_input({4, 3}, s)}};
  });
  add_case("relu", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::relu(x[0]); }),
                     std::vector{random_input({4, 4}, s, -1.0, 1.0, 0.0)}};
  });
  add_case("sigmoid", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::sigmoid(x[0]); }), std::vector{random_input({4, 4}, s, -3, 3)}};
  });
  add_case("reciprocal", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::reciprocal(x[0]); }),
                     std::vector{random_input({3, 3}, s, 0.5, 2.0)}};
  });
  add_case("softmax_rows", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::softmax_rows(x[0], 2.5); }),
                     std::vector{random_input({3, 5}, s)}};
  });
  add_case("softmax_temperature", [](std::uint64_t s) {
    // multiplier 1/tau with tau = 0.3, differentiated through tau as well
    return std::pair{Fn([](const auto& x) { return ad::softmax_rows(x[0], ad::reciprocal(x[1])); }),
                     std::vector{random_input({3, 5}, s), Tensor::from({1}, {0.3}, true)}};
  });
  add_case("layer_norm", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::layer_norm(x[0], x[1], x[2]); }),
                     std::vector{random_input({5, 8}, s), random_input({8}, s + 1, 0.5, 1.5),
                                 random_input({8}, s + 2)}};
  });
  add_case("l2_normalize_rows", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::l2_normalize_rows(x[0]); }),
                     std::vector{random_input({4, 3}, s)}};
  });
  add_case("sparse_matmul", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) {
                       ad::SparseRows w;
                       w.rows = 3;
                       w.cols = 4;
                       w.offsets = {0, 2, 3, 5};
                       w.columns = {0, 3, 1, 1, 2};
                       w.weights = {0.5, -1.0, 2.0, 0.25, 0.75};
                       return ad::sparse_matmul(w, x[0]);
                     }),
                     std::vector{random_input({4, 3}, s)}};
  });
  add_case("sum", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::sum(x[0]); }), std::vector{random_input({3, 4}, s)}};
  });
  add_case("mean", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::mean(x[0]); }), std::vector{random_input({3, 4}, s)}};
  });
  add_case("mse_loss", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::mse_loss(x[0], x[1]); }),
                     std::vector{random_input({6}, s), random_input({6}, s + 1)}};
  });
  add_case("bce_loss", [](std::uint64_t s) {
    return std::pair{Fn([](const auto& x) { return ad::bce_loss(x[0], x[1]); }),
                     std::vector{random_input({6}, s, 0.05, 0.95), random_input({6}, s + 1, 0.0, 1.0)}};
  });
  return cases;
}

}  // namespace

std::vector<GradCheckReport> check_op_gradients(std::size_t seeds) {
  std::vector<GradCheckReport> out;
  for (const auto& c : op_cases()) {
    GradCheckReport r{c.name, 0.0};
    for (std::size_t seed = 0; seed < seeds; ++seed) {
      auto [fn, inputs] = c.make(1000 * seed + 17);
      r.max_error = std::max(r.max_error, ad::grad_check(fn, inputs, 1e-4, seed));
    }
    out.push_back(r);
  }
  return out;
}

GradCheckReport check_model_gradients(std::size_t seeds) {
  GradCheckReport r{"model_loss", 0.0};
  for (std::size_t seed = 0; seed < seeds; ++seed) {
    LabeledPoolParams pool;
    pool.count = 2;
    pool.min_nodes = pool.max_nodes = 6;
    pool.num_labels = 3;
    pool.seed = seed;
    const auto graphs = generate_labeled_pool(pool);

    ModelConfig config;
    config.hidden_dim = 16;
    config.heads = 4;
    config.transformer_layers = 2;
    config.pe_dict_size = 8;
    config.label_vocab_size = 3;
    config.seed = seed;
    ModelParams params = ModelParams::initialize(config);
    const PreparedGraph a = prepare_graph(graphs[0]);
    const PreparedGraph b = prepare_graph(graphs[1]);
    Fn fn = [&](const std::vector<Tensor>&) { return pair_loss(forward(a, b, params).yhat, 0.6, Task::kRegression); };
    // A smaller step than the op checks: the model has many ReLUs and a
    // 1e-4 step occasionally straddles one of their kinks.
    r.max_error = std::max(r.max_error, ad::grad_check(fn, {params.theta, params.positional}, 1e-6, seed));
  }
  return r;
}

}  // namespace infmcs
