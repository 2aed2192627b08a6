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
#include <random>

#include "infmcs/error.hpp"
#include "infmcs/tensor.hpp"

namespace infmcs::ad {

double grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& fn, const std::vector<Tensor>& inputs,
                  double epsilon, std::uint64_t seed, double floor) {
  for (const auto& t : inputs) {
    if (!t.defined()) throw BadInput("grad_check: undefined input");
  }
  std::vector<double> weights;
  auto project = [&](const Tensor& out) {
    if (weights.empty()) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      weights.resize(out.size());
      for (auto& w : weights) w = dist(rng);
    }
    if (weights.size() != out.size()) throw BadInput("grad_check: output size changed between calls");
    return sum(mul(out, Tensor::from(out.shape(), weights)));
  };

  for (auto t : inputs) t.zero_grad();
  Tensor loss = project(fn(inputs));
  backward(loss);

  double worst = 0.0;
  for (auto t : inputs) {
    if (!t.requires_grad()) continue;
    std::vector<double> analytic(t.size(), 0.0);
    if (!t.grad().empty()) analytic.assign(t.grad().begin(), t.grad().end());
    auto values = t.mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      NoGradGuard guard;
      values[i] = saved + epsilon;
      const double up = project(fn(inputs)).item();
      values[i] = saved - epsilon;
      const double down = project(fn(inputs)).item();
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace infmcs::ad
