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

#include "infmcs/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "infmcs/error.hpp"

namespace infmcs {

Graph::Graph(std::string id, std::size_t node_count, std::vector<Edge> edges,
             std::vector<LabelId> labels)
    : id_(std::move(id)), labels_(std::move(labels)), edges_(std::move(edges)) {
  if (labels_.size() != node_count) {
    throw BadInput("graph '" + id_ + "': " + std::to_string(labels_.size()) +
                   " labels for " + std::to_string(node_count) + " nodes");
  }
  for (Edge& e : edges_) {
    if (e.u >= node_count || e.v >= node_count) {
      throw BadInput("graph '" + id_ + "': edge (" + std::to_string(e.u) + "," +
                     std::to_string(e.v) + ") out of range");
    }
    if (e.u == e.v) {
      throw BadInput("graph '" + id_ + "': self-loop on node " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw BadInput("graph '" + id_ + "': duplicate edge (" + std::to_string(dup->u) + "," +
                   std::to_string(dup->v) + ")");
  }

  std::vector<std::size_t> degree(node_count, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
  }
}

Graph Graph::Unlabeled(std::string id, std::size_t node_count, std::vector<Edge> edges) {
  return Graph(std::move(id), node_count, std::move(edges),
               std::vector<LabelId>(node_count, 0));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes, std::string id) const {
  std::vector<NodeId> position(node_count(), static_cast<NodeId>(-1));
  std::vector<LabelId> labels;
  labels.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= node_count() || position[nodes[i]] != static_cast<NodeId>(-1)) {
      throw BadInput("induced_subgraph: invalid or repeated node " + std::to_string(nodes[i]));
    }
    position[nodes[i]] = static_cast<NodeId>(i);
    labels.push_back(labels_[nodes[i]]);
  }
  std::vector<Edge> edges;
  for (const Edge& e : edges_) {
    NodeId a = position[e.u];
    NodeId b = position[e.v];
    if (a != static_cast<NodeId>(-1) && b != static_cast<NodeId>(-1)) edges.push_back({a, b});
  }
  return Graph(std::move(id), nodes.size(), std::move(edges), std::move(labels));
}

Graph Graph::permuted(std::span<const NodeId> perm, std::string id) const {
  if (perm.size() != node_count()) throw BadInput("permuted: permutation has wrong length");
  std::vector<LabelId> labels(node_count());
  for (std::size_t v = 0; v < node_count(); ++v) labels.at(perm[v]) = labels_[v];
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const Edge& e : edges_) edges.push_back({perm[e.u], perm[e.v]});
  return Graph(std::move(id), node_count(), std::move(edges), std::move(labels));
}

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId source) {
  if (source >= g.node_count()) {
    throw BadInput("bfs_distances: source " + std::to_string(source) + " out of range (n=" +
                   std::to_string(g.node_count()) + ")");
  }
  std::vector<std::size_t> dist(g.node_count(), kUnreachable);
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

std::vector<double> closeness_centrality(const Graph& g) {
  const std::size_t total = g.node_count();
  std::vector<double> c(total, 0.0);
  if (total <= 1) return c;
  for (NodeId v = 0; v < total; ++v) {
    auto dist = bfs_distances(g, v);
    std::size_t reachable = 0;
    std::size_t sum = 0;
    for (std::size_t d : dist) {
      if (d != kUnreachable) {
        ++reachable;
        sum += d;
      }
    }
    // Undirected, so sum_j d(v, j) == sum_j d(j, v).
    if (reachable <= 1 || sum == 0) continue;
    const double others = static_cast<double>(reachable - 1);
    c[v] = (others / static_cast<double>(total - 1)) * (others / static_cast<double>(sum));
  }
  return c;
}

NodeOrdering rank_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  NodeOrdering out;
  out.ranks.resize(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) out.ranks[order[r]] = r;
  return out;
}

NodeOrdering node_ordering(const Graph& g) {
  if (g.empty()) throw BadInput("node_ordering: empty graph");
  const auto c = closeness_centrality(g);
  std::vector<std::size_t> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (c[a] != c[b]) return c[a] > c[b];
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    if (g.label(a) != g.label(b)) return g.label(a) < g.label(b);
    return a < b;
  });
  NodeOrdering out;
  out.ranks.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) out.ranks[order[r]] = r;
  return out;
}

bool is_permutation_of_iota(std::span<const std::size_t> ranks) {
  std::vector<bool> seen(ranks.size(), false);
  for (std::size_t r : ranks) {
    if (r >= ranks.size() || seen[r]) return false;
    seen[r] = true;
  }
  return true;
}

}  // namespace infmcs
