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
#include <numeric>

#include "infmcs/oracles.hpp"

namespace infmcs {
namespace {

// A label class split by adjacency to the vertices matched so far: the left
// vertices live in left[l, l+left_len), the right ones in right[r, r+right_len).
struct Bidomain {
  std::size_t l = 0;
  std::size_t r = 0;
  std::size_t left_len = 0;
  std::size_t right_len = 0;
};

struct DenseGraph {
  std::size_t n = 0;
  std::vector<std::uint8_t> adj;
  std::vector<LabelId> labels;

  bool adjacent(std::size_t a, std::size_t b) const { return adj[a * n + b] != 0; }
};

// Vertices renumbered by descending degree, which shrinks McSplit's search.
DenseGraph densify(const Graph& g, const std::vector<NodeId>& order, bool label_aware) {
  DenseGraph d;
  d.n = g.node_count();
  d.adj.assign(d.n * d.n, 0);
  d.labels.resize(d.n);
  std::vector<std::size_t> position(d.n);
  for (std::size_t i = 0; i < d.n; ++i) position[order[i]] = i;
  for (const Edge& e : g.edges()) {
    const auto a = position[e.u];
    const auto b = position[e.v];
    d.adj[a * d.n + b] = 1;
    d.adj[b * d.n + a] = 1;
  }
  for (std::size_t i = 0; i < d.n; ++i) d.labels[i] = label_aware ? g.label(order[i]) : 0;
  return d;
}

std::vector<NodeId> degree_order(const Graph& g) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  return order;
}

class McSplit {
 public:
  McSplit(const DenseGraph& g0, const DenseGraph& g1, const detail::Deadline& deadline)
      : g0_(g0), g1_(g1), deadline_(deadline) {}

  std::vector<std::pair<std::size_t, std::size_t>> run() {
    std::vector<Bidomain> domains;
    std::vector<LabelId> shared;
    for (LabelId l : g0_.labels) {
      if (std::find(g1_.labels.begin(), g1_.labels.end(), l) != g1_.labels.end()) {
        shared.push_back(l);
      }
    }
    std::sort(shared.begin(), shared.end());
    shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
    for (LabelId l : shared) {
      Bidomain bd;
      bd.l = left_.size();
      bd.r = right_.size();
      for (std::size_t v = 0; v < g0_.n; ++v) {
        if (g0_.labels[v] == l) left_.push_back(v);
      }
      for (std::size_t v = 0; v < g1_.n; ++v) {
        if (g1_.labels[v] == l) right_.push_back(v);
      }
      bd.left_len = left_.size() - bd.l;
      bd.right_len = right_.size() - bd.r;
      domains.push_back(bd);
    }
    solve(domains);
    return incumbent_;
  }

  const std::vector<std::pair<std::size_t, std::size_t>>& incumbent() const { return incumbent_; }

 private:
  static std::size_t bound(const std::vector<Bidomain>& domains) {
    std::size_t total = 0;
    for (const auto& bd : domains) total += std::min(bd.left_len, bd.right_len);
    return total;
  }

  // Smallest max(left_len, right_len); ties go to the domain holding the
  // smallest left vertex.
  std::optional<std::size_t> select_domain(const std::vector<Bidomain>& domains) const {
    std::optional<std::size_t> best;
    std::size_t best_size = 0;
    std::size_t best_min_vertex = 0;
    for (std::size_t i = 0; i < domains.size(); ++i) {
      const auto& bd = domains[i];
      if (bd.left_len == 0 || bd.right_len == 0) continue;
      const std::size_t size = std::max(bd.left_len, bd.right_len);
      const std::size_t min_vertex =
          *std::min_element(left_.begin() + bd.l, left_.begin() + bd.l + bd.left_len);
      if (!best || size < best_size || (size == best_size && min_vertex < best_min_vertex)) {
        best = i;
        best_size = size;
        best_min_vertex = min_vertex;
      }
    }
    return best;
  }

  // Moves vertices adjacent to `v` to the front of [start, start+len) and
  // returns how many there are.
  static std::size_t partition(std::vector<std::size_t>& vertices, std::size_t start,
                               std::size_t len, const DenseGraph& g, std::size_t v) {
    auto first = vertices.begin() + start;
    auto mid = std::partition(first, first + len,
                              [&](std::size_t w) { return g.adjacent(v, w); });
    return static_cast<std::size_t>(mid - first);
  }

  std::vector<Bidomain> filter(const std::vector<Bidomain>& domains, std::size_t v,
                               std::size_t w) {
    std::vector<Bidomain> out;
    out.reserve(domains.size() * 2);
    for (const auto& bd : domains) {
      const std::size_t left_adj = partition(left_, bd.l, bd.left_len, g0_, v);
      const std::size_t right_adj = partition(right_, bd.r, bd.right_len, g1_, w);
      const std::size_t left_non = bd.left_len - left_adj;
      const std::size_t right_non = bd.right_len - right_adj;
      if (left_non > 0 && right_non > 0) {
        out.push_back({bd.l + left_adj, bd.r + right_adj, left_non, right_non});
      }
      if (left_adj > 0 && right_adj > 0) out.push_back({bd.l, bd.r, left_adj, right_adj});
    }
    return out;
  }

  void solve(std::vector<Bidomain>& domains) {
    if ((++nodes_ & 1023u) == 0 && deadline_.expired()) throw Timeout{};
    if (current_.size() > incumbent_.size()) incumbent_ = current_;
    if (current_.size() + bound(domains) <= incumbent_.size()) return;

    const auto picked = select_domain(domains);
    if (!picked) return;
    const std::size_t idx = *picked;

    // Take the smallest left vertex of the chosen domain out of the domain.
    auto left_begin = left_.begin() + domains[idx].l;
    auto left_end = left_begin + domains[idx].left_len;
    auto v_it = std::min_element(left_begin, left_end);
    const std::size_t v = *v_it;
    std::iter_swap(v_it, left_end - 1);
    --domains[idx].left_len;

    // Try v -> w for each w in the right half, in increasing vertex order.
    --domains[idx].right_len;
    std::optional<std::size_t> previous;
    for (std::size_t tried = 0; tried <= domains[idx].right_len; ++tried) {
      const std::size_t r = domains[idx].r;
      const std::size_t span = domains[idx].right_len + 1;
      std::size_t pick = span;
      for (std::size_t k = 0; k < span; ++k) {
        const std::size_t cand = right_[r + k];
        if ((!previous || cand > *previous) && (pick == span || cand < right_[r + pick])) pick = k;
      }
      const std::size_t w = right_[r + pick];
      previous = w;
      std::swap(right_[r + pick], right_[r + domains[idx].right_len]);

      auto child = filter(domains, v, w);
      current_.emplace_back(v, w);
      solve(child);
      current_.pop_back();
    }
    ++domains[idx].right_len;

    // Leave v unmatched.
    if (domains[idx].left_len == 0) {
      auto reduced = domains;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(idx));
      solve(reduced);
    } else {
      solve(domains);
    }
  }

 public:
  struct Timeout {};

 private:
  const DenseGraph& g0_;
  const DenseGraph& g1_;
  const detail::Deadline& deadline_;
  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
  std::vector<std::pair<std::size_t, std::size_t>> current_;
  std::vector<std::pair<std::size_t, std::size_t>> incumbent_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

OracleResult mcs_exact(const Graph& g1, const Graph& g2, const McsOptions& options) {
  if (g1.empty() || g2.empty()) throw BadInput("mcs_exact: both graphs must be non-empty");
  detail::Deadline deadline(options.time_budget_seconds);
  const auto order1 = degree_order(g1);
  const auto order2 = degree_order(g2);
  const DenseGraph d1 = densify(g1, order1, options.label_aware);
  const DenseGraph d2 = densify(g2, order2, options.label_aware);

  auto to_result = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    OracleResult result;
    result.value = pairs.size();
    result.provenance = Provenance::kExact;
    NodeMapping mapping;
    mapping.reserve(pairs.size());
    for (auto [a, b] : pairs) mapping.emplace_back(order1[a], order2[b]);
    std::sort(mapping.begin(), mapping.end());
    result.mapping = std::move(mapping);
    result.elapsed_seconds = deadline.elapsed();
    return result;
  };

  McSplit solver(d1, d2, deadline);
  try {
    return to_result(solver.run());
  } catch (const McSplit::Timeout&) {
    throw BudgetExceeded("mcs_exact: time budget of " +
                             std::to_string(options.time_budget_seconds) + "s exceeded",
                         to_result(solver.incumbent()));
  }
}

}  // namespace infmcs
