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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace infmcs {

using NodeId = std::uint32_t;
using LabelId = std::int32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, node-labelled simple graph. Immutable after construction.
///
/// Edges are canonicalised to (min, max) and kept sorted; every node keeps a
/// sorted neighbour list so BFS, degree and adjacency queries are cheap.
class Graph {
 public:
  Graph() = default;

  /// Throws infmcs::Error (bad input) on self-loops, duplicate edges,
  /// out-of-range endpoints or a label vector of the wrong length.
  Graph(std::string id, std::size_t node_count, std::vector<Edge> edges,
        std::vector<LabelId> labels);

  /// Convenience: all nodes share label 0.
  static Graph Unlabeled(std::string id, std::size_t node_count,
                         std::vector<Edge> edges);

  const std::string& id() const noexcept { return id_; }
  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const LabelId> labels() const noexcept { return labels_; }
  LabelId label(NodeId v) const { return labels_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  /// Subgraph induced by `nodes` (in the given order, which becomes the new
  /// node numbering).
  Graph induced_subgraph(std::span<const NodeId> nodes, std::string id) const;

  /// Copy with node `v` renamed to `perm[v]`.
  Graph permuted(std::span<const NodeId> perm, std::string id) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.id_ == b.id_ && a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::string id_;
  std::vector<LabelId> labels_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Hop distances from `source`; kUnreachable for nodes in other components.
std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source);

/// Component-scaled closeness centrality
///   c_i = ((n-1)/(|V|-1)) * ((n-1)/sum_j d(j,i))
/// with n the size of node i's component. Isolated nodes (and the single-node
/// graph) get 0.
std::vector<double> closeness_centrality(const Graph& g);

/// ranks[v] is the position of node v when nodes are sorted by descending
/// centrality. Always a permutation of 0..n-1.
struct NodeOrdering {
  std::vector<std::size_t> ranks;
};

/// Rank of each value in descending order; ties go to the smaller index.
NodeOrdering rank_descending(std::span<const double> values);

/// Centrality ordering with the deterministic tie-break chain
/// (centrality desc, degree desc, label asc, index asc).
NodeOrdering node_ordering(const Graph& g);

bool is_permutation_of_iota(std::span<const std::size_t> ranks);

/// JSON-lines record: {"id": str, "n": int, "labels": [...], "edges": [[u,v],...]}
std::string graph_to_json_line(const Graph& g);
Graph graph_from_json_line(const std::string& line);

}  // namespace infmcs
