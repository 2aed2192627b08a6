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
#include <set>

#include "infmcs/dataset.hpp"

namespace infmcs {
namespace {

std::size_t uniform_in(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Graph with_edges(const Graph& g, std::size_t n, std::vector<Edge> edges, std::vector<LabelId> labels) {
  return Graph(g.id(), n, std::move(edges), std::move(labels));
}

}  // namespace

Graph ba_graph(std::size_t n_nodes, std::size_t attach_m, const Graph* core, Rng& rng,
               std::string id) {
  if (attach_m == 0) throw BadInput("ba_graph: attach_m must be positive");
  std::vector<Edge> edges;
  std::vector<LabelId> labels;
  if (core != nullptr) {
    if (n_nodes < core->node_count()) {
      throw BadInput("ba_graph: n_nodes " + std::to_string(n_nodes) + " smaller than core size " +
                     std::to_string(core->node_count()));
    }
    edges.assign(core->edges().begin(), core->edges().end());
    labels.assign(core->labels().begin(), core->labels().end());
  } else {
    if (n_nodes < attach_m + 1) {
      throw BadInput("ba_graph: n_nodes must be at least attach_m + 1");
    }
    for (NodeId a = 0; a <= attach_m; ++a) {
      for (NodeId b = a + 1; b <= attach_m; ++b) edges.push_back({a, b});
    }
    labels.assign(attach_m + 1, 0);
  }

  // Every edge endpoint once: sampling from this list is degree-proportional.
  std::vector<NodeId> endpoints;
  for (const Edge& e : edges) {
    endpoints.push_back(e.u);
    endpoints.push_back(e.v);
  }

  for (std::size_t next = labels.size(); next < n_nodes; ++next) {
    const std::size_t existing = next;
    const std::size_t want = std::min(attach_m, existing);
    std::vector<NodeId> targets;
    auto add_target = [&](NodeId t) {
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    };
    for (std::size_t draws = 0; targets.size() < want && !endpoints.empty() && draws < 32 * want; ++draws) {
      add_target(endpoints[uniform_in(rng, 0, endpoints.size() - 1)]);
    }
    while (targets.size() < want) add_target(static_cast<NodeId>(uniform_in(rng, 0, existing - 1)));

    const auto v = static_cast<NodeId>(next);
    for (NodeId t : targets) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
    labels.push_back(0);
  }
  return Graph(std::move(id), n_nodes, std::move(edges), std::move(labels));
}

double core_similarity(std::size_t core, std::size_t added1, std::size_t added2) {
  const double c = static_cast<double>(core);
  return c / (c + 0.5 * static_cast<double>(added1 + added2));
}

BaMcsData generate_ba_mcs(const BaMcsParams& p) {
  if (p.core_min < 2 || p.core_min > p.core_max) throw BadInput("generate_ba_mcs: invalid core range");
  if (p.add_min > p.add_max) throw BadInput("generate_ba_mcs: invalid addition range");
  if (p.count == 0) throw BadInput("generate_ba_mcs: count must be at least 1");
  if (p.core_min < p.attach_m + 1) throw BadInput("generate_ba_mcs: core smaller than the BA seed");

  Rng rng(p.seed);
  BaMcsData out;
  std::vector<std::string> sample_ids;
  for (std::size_t i = 0; i < p.count; ++i) {
    const std::size_t c = uniform_in(rng, p.core_min, p.core_max);
    const std::size_t a1 = uniform_in(rng, p.add_min, p.add_max);
    const std::size_t a2 = uniform_in(rng, p.add_min, p.add_max);
    const std::string stem = "mcs" + std::to_string(i);
    Graph core = ba_graph(c, p.attach_m, nullptr, rng, stem + "core");
    Graph g1 = ba_graph(c + a1, p.attach_m, &core, rng, stem + "a");
    Graph g2 = ba_graph(c + a2, p.attach_m, &core, rng, stem + "b");
    out.pairs.push_back({g1.id(), g2.id(), core_similarity(c, a1, a2), Metric::kMcs, Split::kTrain});
    out.samples.push_back({c, a1, a2});
    out.graphs.push_back(std::move(g1));
    out.graphs.push_back(std::move(g2));
    sample_ids.push_back(stem);
  }
  const SplitAssignment split = split_dataset(sample_ids, {0.8, 0.1, 0.1}, p.seed ^ 0x5eedULL);
  std::unordered_map<std::string, Split> where;
  for (const auto& id : split.valid) where[id] = Split::kValid;
  for (const auto& id : split.test) where[id] = Split::kTest;
  for (std::size_t i = 0; i < p.count; ++i) {
    if (auto it = where.find(sample_ids[i]); it != where.end()) out.pairs[i].split = it->second;
  }
  return out;
}

std::size_t apply_random_edit(Graph& g, Rng& rng, EditKind* applied) {
  const std::size_t n = g.node_count();
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<LabelId> labels(g.labels().begin(), g.labels().end());

  auto kind = static_cast<EditKind>(uniform_in(rng, 0, 2));
  std::vector<NodeId> leaves;
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) == 1) leaves.push_back(v);
  }
  if (kind == EditKind::kDeleteLeaf && leaves.empty()) kind = EditKind::kAddEdge;
  const std::size_t max_edges = n * (n - (n > 0 ? 1 : 0)) / 2;
  if (kind == EditKind::kAddEdge && g.edge_count() >= max_edges) kind = EditKind::kAddLeaf;
  if (applied != nullptr) *applied = kind;

  switch (kind) {
    case EditKind::kDeleteLeaf: {
      const NodeId leaf = leaves[uniform_in(rng, 0, leaves.size() - 1)];
      std::vector<Edge> kept;
      for (const Edge& e : edges) {
        if (e.u == leaf || e.v == leaf) continue;
        kept.push_back({e.u > leaf ? e.u - 1 : e.u, e.v > leaf ? e.v - 1 : e.v});
      }
      labels.erase(labels.begin() + leaf);
      g = with_edges(g, n - 1, std::move(kept), std::move(labels));
      return 2;
    }
    case EditKind::kAddLeaf: {
      const auto anchor = static_cast<NodeId>(uniform_in(rng, 0, n - 1));
      edges.push_back({anchor, static_cast<NodeId>(n)});
      labels.push_back(0);
      g = with_edges(g, n + 1, std::move(edges), std::move(labels));
      return 2;
    }
    case EditKind::kAddEdge: {
      NodeId a = 0;
      NodeId b = 0;
      bool found = false;
      for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        a = static_cast<NodeId>(uniform_in(rng, 0, n - 1));
        b = static_cast<NodeId>(uniform_in(rng, 0, n - 1));
        found = a != b && !g.has_edge(a, b);
      }
      if (!found) {
        std::vector<Edge> missing;
        for (NodeId x = 0; x < n; ++x) {
          for (NodeId y = x + 1; y < n; ++y) {
            if (!g.has_edge(x, y)) missing.push_back({x, y});
          }
        }
        const Edge pick = missing[uniform_in(rng, 0, missing.size() - 1)];
        a = pick.u;
        b = pick.v;
      }
      edges.push_back({a, b});
      g = with_edges(g, n, std::move(edges), std::move(labels));
      return 1;
    }
  }
  return 0;
}

BaGedData generate_ba_ged(const BaGedParams& p) {
  if (p.base_nodes < 3) throw BadInput("generate_ba_ged: base_nodes must be at least 3");
  if (p.count == 0) throw BadInput("generate_ba_ged: count must be at least 1");
  Rng rng(p.seed);
  const Graph base[2] = {ba_graph(p.base_nodes, p.attach_m, nullptr, rng, "base0"),
                         ba_graph(p.base_nodes, p.attach_m, nullptr, rng, "base1")};

  BaGedData out;
  for (std::size_t col = 0; col < 2; ++col) {
    for (std::size_t i = 0; i < p.count; ++i) {
      // The number of edits steps up every 10 samples and wraps within 1..10.
      const std::size_t steps = (i / 10) % 10 + 1;
      Graph g = Graph(base[col].id(), base[col].node_count(),
                      std::vector<Edge>(base[col].edges().begin(), base[col].edges().end()),
                      std::vector<LabelId>(base[col].labels().begin(), base[col].labels().end()));
      std::size_t cost = 0;
      for (std::size_t s = 0; s < steps; ++s) cost += apply_random_edit(g, rng);
      g = Graph("ged" + std::to_string(col) + "_" + std::to_string(i), g.node_count(),
                std::vector<Edge>(g.edges().begin(), g.edges().end()),
                std::vector<LabelId>(g.labels().begin(), g.labels().end()));
      out.graphs.push_back(std::move(g));
      out.samples.push_back({col, steps, cost});
    }
  }
  out.base_distance = std::min(ged_beam(base[0], base[1], p.beam_width).value,
                               ged_hungarian(base[0], base[1]).value);

  std::vector<std::string> ids;
  for (const auto& g : out.graphs) ids.push_back(g.id());
  const SplitAssignment split = split_dataset(ids, {0.8, 0.1, 0.1}, p.seed ^ 0x5eedULL);
  std::unordered_map<std::string, Split> where;
  for (const auto& id : split.train) where[id] = Split::kTrain;
  for (const auto& id : split.valid) where[id] = Split::kValid;
  for (const auto& id : split.test) where[id] = Split::kTest;
  out.split = split;

  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < out.graphs.size(); ++i) {
    for (std::size_t j = i + 1; j < out.graphs.size(); ++j) {
      if (where[ids[i]] == where[ids[j]]) candidates.emplace_back(i, j);
    }
  }
  if (p.max_pairs > 0 && candidates.size() > p.max_pairs) {
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(p.max_pairs);
    std::sort(candidates.begin(), candidates.end());
  }

  for (auto [i, j] : candidates) {
    const Graph& a = out.graphs[i];
    const Graph& b = out.graphs[j];
    std::size_t path = out.samples[i].edit_cost + out.samples[j].edit_cost;
    if (out.samples[i].collection != out.samples[j].collection) path += out.base_distance;
    const std::size_t approx = std::min(ged_beam(a, b, p.beam_width).value, ged_hungarian(a, b).value);
    const std::size_t ged = std::min(path, approx);
    out.pairs.push_back({a.id(), b.id(), nged(a, b, static_cast<double>(ged)), Metric::kGed, where[ids[i]]});
  }
  return out;
}

std::vector<Graph> generate_labeled_pool(const LabeledPoolParams& p) {
  if (p.min_nodes == 0 || p.min_nodes > p.max_nodes) throw BadInput("generate_labeled_pool: invalid size range");
  if (p.num_labels == 0) throw BadInput("generate_labeled_pool: num_labels must be positive");
  Rng rng(p.seed);
  std::vector<double> weights(p.num_labels);
  for (std::size_t k = 0; k < p.num_labels; ++k) weights[k] = std::ldexp(1.0, -static_cast<int>(k));
  std::discrete_distribution<LabelId> label_dist(weights.begin(), weights.end());

  std::vector<Graph> out;
  out.reserve(p.count);
  for (std::size_t i = 0; i < p.count; ++i) {
    const std::size_t n = uniform_in(rng, p.min_nodes, p.max_nodes);
    const std::string id = p.id_prefix + std::to_string(i);
    Graph shape = n == 1 ? Graph::Unlabeled(id, 1, {})
                         : ba_graph(n, std::min(p.attach_m, n - 1), nullptr, rng, id);
    std::vector<LabelId> labels(n);
    for (auto& l : labels) l = label_dist(rng);
    out.emplace_back(id, n, std::vector<Edge>(shape.edges().begin(), shape.edges().end()), std::move(labels));
  }
  return out;
}

}  // namespace infmcs
