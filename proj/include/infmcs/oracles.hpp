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

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infmcs/error.hpp"
#include "infmcs/graph.hpp"

namespace infmcs {

enum class Provenance { kExact, kBeam, kHungarian, kFallbackMin };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// Node correspondence u (first graph) -> v (second graph).
using NodeMapping = std::vector<std::pair<NodeId, NodeId>>;

/// MCS node count or GED edit cost, with how it was obtained.
struct OracleResult {
  std::size_t value = 0;
  Provenance provenance = Provenance::kExact;
  std::optional<NodeMapping> mapping;
  double elapsed_seconds = 0.0;
};

/// Thrown when an oracle runs out of time. Carries the best value seen so far
/// (a lower bound for MCS, an upper bound for GED when one was found).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::optional<OracleResult> best)
      : Error(ErrorKind::kBudgetExceeded, what), best_(std::move(best)) {}

  const std::optional<OracleResult>& best() const noexcept { return best_; }

 private:
  std::optional<OracleResult> best_;
};

struct McsOptions {
  double time_budget_seconds = 10.0;
  /// When false, node labels are ignored (all nodes compatible).
  bool label_aware = true;
};

/// Maximum common induced subgraph (not necessarily connected) by McSplit
/// branch and bound over label-class bidomains. The returned mapping is a
/// witness; it is injective, label compatible and preserves both adjacency and
/// non-adjacency.
OracleResult mcs_exact(const Graph& g1, const Graph& g2, const McsOptions& options = {});

/// Exact GED by A* over partial node assignments. Uniform costs: node
/// insertion/deletion 1, substitution 0 or 1 by label, edge insertion/deletion 1.
OracleResult ged_astar(const Graph& g1, const Graph& g2, double time_budget_seconds = 10.0);

/// A* with the open list truncated to `width` nodes per depth. Upper bound.
OracleResult ged_beam(const Graph& g1, const Graph& g2, std::size_t width = 100);

/// Riesen-Bunke bipartite bound: optimal node assignment under local edge
/// costs, then the true cost of the induced edit path. Upper bound.
OracleResult ged_hungarian(const Graph& g1, const Graph& g2);

/// Cost of the complete edit path induced by a node assignment.
/// `assignment[u]` is the image of u in g2, or std::nullopt for deletion;
/// unmatched g2 nodes are inserted.
std::size_t edit_path_cost(const Graph& g1, const Graph& g2,
                           const std::vector<std::optional<NodeId>>& assignment);

struct GedLabelOptions {
  double astar_budget_seconds = 10.0;
  std::size_t beam_width = 100;
};

/// A* when it finishes within budget, otherwise min(beam, hungarian) with
/// provenance fallback_min.
OracleResult label_ged(const Graph& g1, const Graph& g2, const GedLabelOptions& options = {});

struct Assignment {
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;
};

/// Minimum-cost perfect assignment on a square row-major matrix (Kuhn-Munkres
/// with potentials, O(n^3)). Throws on non-square or non-finite input.
Assignment hungarian_assignment(const std::vector<std::vector<double>>& cost);

/// |MCS| / ((|G1|+|G2|)/2)
double nmcs(const Graph& g1, const Graph& g2, std::size_t mcs_value);
/// exp(-GED / ((|G1|+|G2|)/2))
double nged(const Graph& g1, const Graph& g2, double ged_value);

namespace detail {

/// Wall-clock budget checked by the search loops.
class Deadline {
 public:
  explicit Deadline(double seconds)
      : start_(std::chrono::steady_clock::now()),
        end_(start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(seconds < 1e7 ? seconds : 1e7))) {}

  bool expired() const { return std::chrono::steady_clock::now() >= end_; }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point end_;
};

}  // namespace detail
}  // namespace infmcs
