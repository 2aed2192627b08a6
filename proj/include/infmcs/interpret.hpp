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

#include <string>
#include <vector>

#include "infmcs/graph.hpp"
#include "infmcs/model.hpp"
#include "infmcs/oracles.hpp"

namespace infmcs {

struct PredictedMcs {
  double yhat = 0.0;
  std::size_t m = 0;
  bool a_is_first = true;      // which input played G1 (the side nodes come from)
  std::vector<NodeId> nodes;   // selected G1 nodes, ascending
  Graph subgraph;              // induced on `nodes`, renumbered in that order
  std::vector<double> scores;  // matching score of every G1 node
};

/// m = round_half_up(yhat * (|G1| + |G2|) / 2), clamped to [0, |G1|]; keeps
/// the m G1 nodes with the highest matching scores (ties to the lower index).
PredictedMcs infer_mcs(const ModelParams& params, const Graph& a, const Graph& b);

/// Similarity between the predicted subgraph and an exact MCS of (a, b), both
/// taken on the G1 side: nMCS of the two subgraphs. 1 when both are empty,
/// 0 when exactly one is.
double mcs_quality(const PredictedMcs& predicted, const Graph& a, const Graph& b, const McsOptions& options = {});

}  // namespace infmcs
