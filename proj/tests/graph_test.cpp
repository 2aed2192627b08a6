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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "brute_force.hpp"
#include "infmcs/error.hpp"
#include "infmcs/graph.hpp"

namespace infmcs {
namespace {

Graph path3() { return Graph::Unlabeled("p3", 3, {{0, 1}, {1, 2}}); }
Graph triangle() { return Graph::Unlabeled("tri", 3, {{0, 1}, {1, 2}, {0, 2}}); }

TEST(GraphTest, RejectsInvalidStructure) {
  EXPECT_THROW(Graph::Unlabeled("x", 2, {{0, 0}}), Error);
  EXPECT_THROW(Graph::Unlabeled("x", 2, {{0, 1}, {1, 0}}), Error);
  EXPECT_THROW(Graph::Unlabeled("x", 2, {{0, 2}}), Error);
  EXPECT_THROW(Graph("x", 2, {}, {0}), Error);
}

TEST(GraphTest, CanonicalEdgesAndAdjacency) {
  Graph g = Graph::Unlabeled("g", 4, {{3, 1}, {0, 1}});
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 3}));
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_FALSE(g.has_edge(0, 3));
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 0u);
}

TEST(BfsTest, Examples) {
  EXPECT_EQ(bfs_distances(path3(), 0), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(bfs_distances(Graph::Unlabeled("k1", 1, {}), 0), (std::vector<std::size_t>{0}));
  EXPECT_EQ(bfs_distances(Graph::Unlabeled("two", 2, {}), 0), (std::vector<std::size_t>{0, kUnreachable}));
  EXPECT_THROW(bfs_distances(path3(), 3), Error);
}

TEST(ClosenessTest, Examples) {
  auto c = closeness_centrality(path3());
  EXPECT_DOUBLE_EQ(c[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(c[1], 1.0);
  EXPECT_DOUBLE_EQ(c[2], 2.0 / 3.0);
  EXPECT_EQ(closeness_centrality(Graph::Unlabeled("k1", 1, {})), (std::vector<double>{0.0}));
  for (double v : closeness_centrality(triangle())) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(ClosenessTest, ComponentScaling) {
  // Edge 0-1 plus isolated node 2: n = 2 inside a 3-node graph.
  auto c = closeness_centrality(Graph::Unlabeled("g", 3, {{0, 1}}));
  EXPECT_DOUBLE_EQ(c[0], 0.5);
  EXPECT_DOUBLE_EQ(c[1], 0.5);
  EXPECT_DOUBLE_EQ(c[2], 0.0);
}

TEST(ClosenessTest, RangeAndUniversalNodes) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    Graph g = testing::random_graph(rng, 1, 12, 0.3, 1, "r");
    auto c = closeness_centrality(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      EXPECT_GE(c[v], 0.0);
      EXPECT_LE(c[v], 1.0 + 1e-12);
      const bool universal = g.node_count() > 1 && g.degree(v) == g.node_count() - 1;
      EXPECT_EQ(std::abs(c[v] - 1.0) < 1e-12, universal) << "node " << v;
    }
  }
}

TEST(NodeOrderingTest, PaperExample) {
  const double values[] = {0.4, 0.6, 0.1, 0.9};
  EXPECT_EQ(rank_descending(values).ranks, (std::vector<std::size_t>{2, 1, 3, 0}));
}

TEST(NodeOrderingTest, TieBreaks) {
  EXPECT_EQ(node_ordering(triangle()).ranks, (std::vector<std::size_t>{0, 1, 2}));
  Graph star = Graph::Unlabeled("star", 4, {{1, 0}, {1, 2}, {1, 3}});
  EXPECT_EQ(node_ordering(star).ranks, (std::vector<std::size_t>{1, 0, 2, 3}));
  // Equal centrality and degree: the smaller label goes first.
  Graph labelled("lab", 2, {{0, 1}}, {5, 2});
  EXPECT_EQ(node_ordering(labelled).ranks, (std::vector<std::size_t>{1, 0}));
}

TEST(NodeOrderingTest, AlwaysAPermutation) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    Graph g = testing::random_graph(rng, 1, 15, 0.25, 3, "r");
    EXPECT_TRUE(is_permutation_of_iota(node_ordering(g).ranks));
  }
}

TEST(NodeOrderingTest, InvariantUnderRelabelingWhenCentralitiesDistinct) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 100) {
    Graph g = testing::random_graph(rng, 3, 10, 0.35, 1, "r");
    auto c = closeness_centrality(g);
    auto sorted = c;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Graph h = g.permuted(perm, "p");
    auto rg = node_ordering(g).ranks;
    auto rh = node_ordering(h).ranks;
    for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(rg[v], rh[perm[v]]);
    ++checked;
  }
}

TEST(GraphIoTest, JsonLineRoundTrip) {
  Graph g("mol-1", 4, {{0, 1}, {2, 3}, {1, 2}}, {3, 0, 0, 7});
  const std::string line = graph_to_json_line(g);
  EXPECT_EQ(line, R"({"id":"mol-1","n":4,"labels":[3,0,0,7],"edges":[[0,1],[1,2],[2,3]]})");
  Graph back = graph_from_json_line(line);
  EXPECT_EQ(back, g);
  EXPECT_EQ(graph_to_json_line(back), line);
}

TEST(GraphIoTest, RejectsMalformedRecords) {
  EXPECT_THROW(graph_from_json_line("{"), Error);
  EXPECT_THROW(graph_from_json_line(R"({"id":"a","n":2,"labels":[0,0],"edges":[[0,0]]})"), Error);
  EXPECT_THROW(graph_from_json_line(R"({"id":"a","n":2,"labels":[0],"edges":[]})"), Error);
  EXPECT_THROW(graph_from_json_line(R"({"id":"a","n":2,"labels":[0,0],"edges":[],"extra":1})"), Error);
  EXPECT_THROW(graph_from_json_line(R"({"id":1,"n":2,"labels":[0,0],"edges":[]})"), Error);
}

TEST(GraphTest, InducedSubgraphAndPermutation) {
  Graph g("g", 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0, 1, 2, 3});
  const NodeId keep[] = {3, 0, 1};
  Graph s = g.induced_subgraph(keep, "s");
  EXPECT_EQ(s.node_count(), 3u);
  EXPECT_EQ(s.edge_count(), 2u);  // 3-0 and 0-1
  EXPECT_TRUE(s.has_edge(0, 1));
  EXPECT_TRUE(s.has_edge(1, 2));
  EXPECT_EQ(s.label(0), 3);
  const NodeId perm[] = {1, 2, 3, 0};
  Graph p = g.permuted(perm, "p");
  EXPECT_TRUE(p.has_edge(1, 2));
  EXPECT_TRUE(p.has_edge(1, 0));
  EXPECT_EQ(p.label(1), 0);
}

}  // namespace
}  // namespace infmcs
