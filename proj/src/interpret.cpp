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
#include <numeric>

#include "infmcs/error.hpp"
#include "infmcs/interpret.hpp"

namespace infmcs {

PredictedMcs infer_mcs(const ModelParams& params, const Graph& a, const Graph& b) {
  ad::NoGradGuard no_grad;
  const auto r = forward(a, b, params);
  const Graph& g1 = r.a_is_first ? a : b;
  const Graph& g2 = r.a_is_first ? b : a;

  PredictedMcs out;
  out.yhat = r.yhat.item();
  if (!std::isfinite(out.yhat)) throw NumericFailure("non-finite similarity for (" + a.id() + ", " + b.id() + ")");
  out.a_is_first = r.a_is_first;
  out.scores.assign(r.scores.values().begin(), r.scores.values().end());
  const double size = out.yhat * static_cast<double>(g1.node_count() + g2.node_count()) / 2.0;
  out.m = static_cast<std::size_t>(std::clamp(std::floor(size + 0.5), 0.0, static_cast<double>(g1.node_count())));

  std::vector<NodeId> order(g1.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId x, NodeId y) { return out.scores[x] > out.scores[y]; });
  out.nodes.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(out.m));
  std::sort(out.nodes.begin(), out.nodes.end());
  out.subgraph = g1.induced_subgraph(out.nodes, g1.id() + ":predicted");
  return out;
}

double mcs_quality(const PredictedMcs& predicted, const Graph& a, const Graph& b, const McsOptions& options) {
  const Graph& g1 = predicted.a_is_first ? a : b;
  const Graph& g2 = predicted.a_is_first ? b : a;
  const auto truth = mcs_exact(g1, g2, options);
  std::vector<NodeId> true_nodes;
  for (const auto& [u, v] : *truth.mapping) true_nodes.push_back(u);
  std::sort(true_nodes.begin(), true_nodes.end());

  const bool pred_empty = predicted.subgraph.empty();
  if (pred_empty || true_nodes.empty()) return pred_empty && true_nodes.empty() ? 1.0 : 0.0;
  const Graph true_sub = g1.induced_subgraph(true_nodes, g1.id() + ":mcs");
  const auto overlap = mcs_exact(predicted.subgraph, true_sub, options);
  return nmcs(predicted.subgraph, true_sub, overlap.value);
}

}  // namespace infmcs
