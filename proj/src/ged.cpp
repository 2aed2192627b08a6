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
#include <limits>
#include <memory>
#include <numeric>
#include <queue>

#include "infmcs/oracles.hpp"

namespace infmcs {
namespace {

constexpr std::int32_t kDeleted = -1;
constexpr std::int32_t kUnassigned = -2;

// Dense view of a GED instance with g1's nodes in processing order.
class GedInstance {
 public:
  GedInstance(const Graph& g1, const Graph& g2) : g1_(g1), g2_(g2) {
    n1_ = g1.node_count();
    n2_ = g2.node_count();
    order_.resize(n1_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](NodeId a, NodeId b) { return g1.degree(a) > g1.degree(b); });
    adj1_.assign(n1_ * n1_, 0);
    adj2_.assign(n2_ * n2_, 0);
    for (const Edge& e : g1.edges()) adj1_[e.u * n1_ + e.v] = adj1_[e.v * n1_ + e.u] = 1;
    for (const Edge& e : g2.edges()) adj2_[e.u * n2_ + e.v] = adj2_[e.v * n2_ + e.u] = 1;
  }

  std::size_t depth_limit() const { return n1_; }
  std::size_t n2() const { return n2_; }

  // Extra cost of mapping the depth-th node of g1 (in processing order) to
  // `image` (or deletion), given the images of the previously processed nodes.
  std::size_t step_cost(const std::int32_t* images, std::size_t depth, std::int32_t image) const {
    const NodeId u = order_[depth];
    std::size_t cost = 0;
    if (image == kDeleted) {
      cost += 1;
    } else if (g1_.label(u) != g2_.label(static_cast<NodeId>(image))) {
      cost += 1;
    }
    for (std::size_t k = 0; k < depth; ++k) {
      const NodeId w = order_[k];
      const bool e1 = adj1_[u * n1_ + w] != 0;
      const std::int32_t wi = images[k];
      if (image != kDeleted && wi != kDeleted) {
        const bool e2 = adj2_[static_cast<std::size_t>(image) * n2_ + static_cast<std::size_t>(wi)] != 0;
        cost += (e1 != e2) ? 1 : 0;
      } else {
        cost += e1 ? 1 : 0;
      }
    }
    return cost;
  }

  // Insertion of every g2 node left without a preimage, plus their edges.
  std::size_t completion_cost(const std::vector<bool>& used2) const {
    std::size_t cost = 0;
    for (std::size_t v = 0; v < n2_; ++v) cost += used2[v] ? 0 : 1;
    for (const Edge& e : g2_.edges()) cost += (!used2[e.u] || !used2[e.v]) ? 1 : 0;
    return cost;
  }

  // Admissible lower bound on the remaining cost: label multiset mismatch of
  // the unprocessed nodes plus the difference in still-undecided edge counts.
  std::size_t heuristic(std::size_t depth, const std::vector<bool>& used2) const {
    std::vector<LabelId> rest1;
    std::vector<LabelId> rest2;
    std::vector<bool> pending1(n1_, false);
    for (std::size_t k = depth; k < n1_; ++k) {
      rest1.push_back(g1_.label(order_[k]));
      pending1[order_[k]] = true;
    }
    for (std::size_t v = 0; v < n2_; ++v) {
      if (!used2[v]) rest2.push_back(g2_.label(static_cast<NodeId>(v)));
    }
    std::sort(rest1.begin(), rest1.end());
    std::sort(rest2.begin(), rest2.end());
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < rest1.size() && j < rest2.size();) {
      if (rest1[i] == rest2[j]) {
        ++common;
        ++i;
        ++j;
      } else if (rest1[i] < rest2[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    const std::size_t node_lb = std::max(rest1.size(), rest2.size()) - common;

    std::size_t e1 = 0;
    for (const Edge& e : g1_.edges()) e1 += (pending1[e.u] || pending1[e.v]) ? 1 : 0;
    std::size_t e2 = 0;
    for (const Edge& e : g2_.edges()) e2 += (!used2[e.u] || !used2[e.v]) ? 1 : 0;
    const std::size_t edge_lb = e1 > e2 ? e1 - e2 : e2 - e1;
    return node_lb + edge_lb;
  }

  NodeMapping mapping(const std::vector<std::int32_t>& images) const {
    NodeMapping m;
    for (std::size_t k = 0; k < n1_; ++k) {
      if (images[k] >= 0) m.emplace_back(order_[k], static_cast<NodeId>(images[k]));
    }
    std::sort(m.begin(), m.end());
    return m;
  }

 private:
  const Graph& g1_;
  const Graph& g2_;
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<NodeId> order_;
  std::vector<std::uint8_t> adj1_;
  std::vector<std::uint8_t> adj2_;
};

struct SearchNode {
  std::vector<std::int32_t> images;  // images[k] for processed depth k
  std::size_t g = 0;
  std::size_t h = 0;
  std::uint64_t serial = 0;

  std::size_t depth() const { return images.size(); }
  std::size_t f() const { return g + h; }
};

std::vector<bool> used_mask(const SearchNode& node, std::size_t n2) {
  std::vector<bool> used(n2, false);
  for (std::int32_t img : node.images) {
    if (img >= 0) used[static_cast<std::size_t>(img)] = true;
  }
  return used;
}

// Children of `node`, including the completed-path cost at the last depth.
template <typename Emit>
void expand(const GedInstance& inst, const SearchNode& node, std::uint64_t& serial, Emit emit) {
  const std::size_t depth = node.depth();
  auto used = used_mask(node, inst.n2());
  auto make_child = [&](std::int32_t image) {
    SearchNode child;
    child.images = node.images;
    child.images.push_back(image);
    child.g = node.g + inst.step_cost(node.images.data(), depth, image);
    if (image >= 0) used[static_cast<std::size_t>(image)] = true;
    if (child.depth() == inst.depth_limit()) {
      child.g += inst.completion_cost(used);
      child.h = 0;
    } else {
      child.h = inst.heuristic(child.depth(), used);
    }
    if (image >= 0) used[static_cast<std::size_t>(image)] = false;
    child.serial = serial++;
    emit(std::move(child));
  };
  for (std::size_t v = 0; v < inst.n2(); ++v) {
    if (!used[v]) make_child(static_cast<std::int32_t>(v));
  }
  make_child(kDeleted);
}

// Lower f first; on ties prefer deeper nodes, then creation order.
struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.f() != b.f()) return a.f() < b.f();
    if (a.depth() != b.depth()) return a.depth() > b.depth();
    return a.serial < b.serial;
  }
};

SearchNode root(const GedInstance& inst) {
  SearchNode r;
  if (inst.depth_limit() == 0) {
    r.g = inst.completion_cost(std::vector<bool>(inst.n2(), false));
  } else {
    r.h = inst.heuristic(0, std::vector<bool>(inst.n2(), false));
  }
  return r;
}

}  // namespace

std::size_t edit_path_cost(const Graph& g1, const Graph& g2,
                           const std::vector<std::optional<NodeId>>& assignment) {
  if (assignment.size() != g1.node_count()) {
    throw BadInput("edit_path_cost: assignment size does not match g1");
  }
  std::vector<bool> used(g2.node_count(), false);
  std::size_t cost = 0;
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    if (!assignment[u]) {
      cost += 1;
      continue;
    }
    const NodeId v = *assignment[u];
    if (v >= g2.node_count() || used[v]) throw BadInput("edit_path_cost: assignment not injective");
    used[v] = true;
    if (g1.label(static_cast<NodeId>(u)) != g2.label(v)) cost += 1;
  }
  for (std::size_t v = 0; v < g2.node_count(); ++v) cost += used[v] ? 0 : 1;
  for (const Edge& e : g1.edges()) {
    const auto& a = assignment[e.u];
    const auto& b = assignment[e.v];
    if (!a || !b || !g2.has_edge(*a, *b)) cost += 1;
  }
  std::vector<std::int64_t> preimage(g2.node_count(), -1);
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    if (assignment[u]) preimage[*assignment[u]] = static_cast<std::int64_t>(u);
  }
  for (const Edge& e : g2.edges()) {
    const auto a = preimage[e.u];
    const auto b = preimage[e.v];
    if (a < 0 || b < 0 || !g1.has_edge(static_cast<NodeId>(a), static_cast<NodeId>(b))) cost += 1;
  }
  return cost;
}

OracleResult ged_astar(const Graph& g1, const Graph& g2, double time_budget_seconds) {
  if (g1.empty() || g2.empty()) throw BadInput("ged_astar: both graphs must be non-empty");
  detail::Deadline deadline(time_budget_seconds);
  GedInstance inst(g1, g2);
  std::uint64_t serial = 1;

  auto worse = [](const SearchNode& a, const SearchNode& b) { return NodeOrder{}(b, a); };
  std::priority_queue<SearchNode, std::vector<SearchNode>, decltype(worse)> open(worse);
  open.push(root(inst));
  std::uint64_t expansions = 0;
  while (!open.empty()) {
    if ((++expansions & 255u) == 0 && deadline.expired()) {
      throw BudgetExceeded("ged_astar: time budget of " + std::to_string(time_budget_seconds) +
                               "s exceeded",
                           std::nullopt);
    }
    SearchNode node = open.top();
    open.pop();
    if (node.depth() == inst.depth_limit()) {
      OracleResult result;
      result.value = node.g;
      result.provenance = Provenance::kExact;
      result.mapping = inst.mapping(node.images);
      result.elapsed_seconds = deadline.elapsed();
      return result;
    }
    expand(inst, node, serial, [&](SearchNode&& child) { open.push(std::move(child)); });
  }
  throw Error(ErrorKind::kNumeric, "ged_astar: search exhausted without a complete path");
}

namespace {

SearchNode beam_pass(const GedInstance& inst, std::size_t width) {
  std::uint64_t serial = 1;

  std::vector<SearchNode> level{root(inst)};
  for (std::size_t depth = 0; depth < inst.depth_limit(); ++depth) {
    std::vector<SearchNode> next;
    for (const auto& node : level) {
      expand(inst, node, serial, [&](SearchNode&& child) { next.push_back(std::move(child)); });
    }
    if (next.size() > width) {
      std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(width), next.end(),
                        NodeOrder{});
      next.resize(width);
    }
    level = std::move(next);
  }
  return *std::min_element(level.begin(), level.end(), NodeOrder{});
}

}  // namespace

OracleResult ged_beam(const Graph& g1, const Graph& g2, std::size_t width) {
  if (width == 0) throw BadInput("ged_beam: width must be positive");
  if (g1.empty() || g2.empty()) throw BadInput("ged_beam: both graphs must be non-empty");
  detail::Deadline clock(1e7);
  GedInstance inst(g1, g2);
  // A single truncated pass can do worse with a wider beam, because extra
  // children crowd out the narrow beam's survivors. Taking the best pass over
  // the halving chain w, w/2, ..., 1 keeps the result non-increasing along
  // any doubling sequence of widths for at most twice the work.
  SearchNode best = beam_pass(inst, width);
  for (std::size_t w = width / 2; w >= 1; w /= 2) {
    SearchNode candidate = beam_pass(inst, w);
    if (candidate.g < best.g) best = std::move(candidate);
  }
  OracleResult result;
  result.value = best.g;
  result.provenance = Provenance::kBeam;
  result.mapping = inst.mapping(best.images);
  result.elapsed_seconds = clock.elapsed();
  return result;
}

OracleResult ged_hungarian(const Graph& g1, const Graph& g2) {
  detail::Deadline clock(1e7);
  const std::size_t n1 = g1.node_count();
  const std::size_t n2 = g2.node_count();
  const std::size_t n = n1 + n2;
  // Forbidden cells get a cost no optimal assignment would ever choose.
  const double forbidden = 4.0 * static_cast<double>(n + g1.edge_count() + g2.edge_count() + 1);

  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n1; ++u) {
    const double du = static_cast<double>(g1.degree(static_cast<NodeId>(u)));
    for (std::size_t v = 0; v < n2; ++v) {
      const double dv = static_cast<double>(g2.degree(static_cast<NodeId>(v)));
      // With unlabelled edges the optimal local edge assignment leaves
      // |deg(u) - deg(v)| edges unmatched.
      cost[u][v] = (g1.label(static_cast<NodeId>(u)) == g2.label(static_cast<NodeId>(v)) ? 0.0 : 1.0) +
                   std::abs(du - dv);
    }
    for (std::size_t k = 0; k < n1; ++k) cost[u][n2 + k] = (k == u) ? 1.0 + du : forbidden;
  }
  for (std::size_t v = 0; v < n2; ++v) {
    const double dv = static_cast<double>(g2.degree(static_cast<NodeId>(v)));
    for (std::size_t k = 0; k < n2; ++k) cost[n1 + k][v] = (k == v) ? 1.0 + dv : forbidden;
    // bottom-right block stays zero
  }

  const Assignment assignment = hungarian_assignment(cost);
  std::vector<std::optional<NodeId>> images(n1);
  NodeMapping mapping;
  for (std::size_t u = 0; u < n1; ++u) {
    const std::size_t col = assignment.column_of_row[u];
    if (col < n2) {
      images[u] = static_cast<NodeId>(col);
      mapping.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(col));
    }
  }
  OracleResult result;
  result.value = edit_path_cost(g1, g2, images);
  result.provenance = Provenance::kHungarian;
  result.mapping = std::move(mapping);
  result.elapsed_seconds = clock.elapsed();
  return result;
}

OracleResult label_ged(const Graph& g1, const Graph& g2, const GedLabelOptions& options) {
  try {
    return ged_astar(g1, g2, options.astar_budget_seconds);
  } catch (const BudgetExceeded&) {
    detail::Deadline clock(1e7);
    OracleResult beam = ged_beam(g1, g2, options.beam_width);
    OracleResult hung = ged_hungarian(g1, g2);
    OracleResult best = beam.value <= hung.value ? std::move(beam) : std::move(hung);
    best.provenance = Provenance::kFallbackMin;
    best.elapsed_seconds = options.astar_budget_seconds + clock.elapsed();
    return best;
  }
}

}  // namespace infmcs
