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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "brute_force.hpp"
#include "infmcs/error.hpp"
#include "infmcs/evaluation.hpp"

namespace infmcs {
namespace {

namespace fs = std::filesystem;

// ROC area by sweeping thresholds over distinct scores and integrating with
// trapezoids; ties between classes contribute half through the diagonal step.
double trapezoid_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> cuts(scores);
  std::sort(cuts.begin(), cuts.end(), std::greater<>());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double neg = static_cast<double>(labels.size()) - pos;
  double area = 0.0, px = 0.0, py = 0.0;
  for (double c : cuts) {
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= c) (labels[i] == 1 ? tp : fp) += 1.0;
    }
    const double x = fp / neg, y = tp / pos;
    area += (x - px) * (y + py) / 2.0;
    px = x;
    py = y;
  }
  return area;
}

TEST(MseTest, Examples) {
  const std::vector<double> a = {0.1, 0.5, 0.9};
  EXPECT_EQ(mse_metric(a, a), 0.0);
  const std::vector<double> b = {0.2, 0.6, 1.0};
  EXPECT_NEAR(mse_metric(b, a), 0.01, 1e-15);
  const std::vector<double> p = {0.3, 0.0, 1.0, 0.25};
  const std::vector<double> t = {0.1, 0.5, 0.5, 0.75};
  EXPECT_NEAR(mse_metric(p, t), (0.04 + 0.25 + 0.25 + 0.25) / 4.0, 1e-15);
  EXPECT_THROW(mse_metric(p, a), Error);
}

TEST(SpearmanTest, Examples) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> rev = {5, 4, 3, 2, 1};
  const std::vector<double> flat = {2, 2, 2, 2, 2};
  EXPECT_DOUBLE_EQ(spearman_rho(x, x), 1.0);
  EXPECT_DOUBLE_EQ(spearman_rho(x, rev), -1.0);
  EXPECT_EQ(spearman_rho(x, flat), 0.0);
  const std::vector<double> ties = {1, 2, 2, 3};
  EXPECT_EQ(average_ranks(ties), (std::vector<double>{1.0, 2.5, 2.5, 4.0}));
  // d^2 formula on untied data: rho = 1 - 6 * 2 / (5 * 24).
  const std::vector<double> swapped = {2, 1, 3, 4, 5};
  EXPECT_NEAR(spearman_rho(swapped, x), 1.0 - 12.0 / 120.0, 1e-15);
}

TEST(SpearmanTest, MonotoneInvariance) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(30), b(30);
    for (auto& v : a) v = n(rng);
    for (auto& v : b) v = n(rng);
    std::vector<double> fa(a), gb(b);
    for (auto& v : fa) v = std::exp(v);
    for (auto& v : gb) v = v * v * v + 2.0;
    EXPECT_NEAR(spearman_rho(a, b), spearman_rho(fa, gb), 1e-12);
  }
}

TEST(PrecisionTest, Examples) {
  std::vector<double> v(20);
  std::iota(v.begin(), v.end(), 0.0);
  std::vector<double> rev(v.rbegin(), v.rend());
  EXPECT_EQ(precision_at_k(v, v, 10), 1.0);
  EXPECT_EQ(precision_at_k(v, rev, 10), 0.0);
  std::vector<double> half(v);
  // Swap the top five with the next block so that 5 of the top 10 survive.
  for (std::size_t i = 0; i < 5; ++i) std::swap(half[19 - i], half[4 - i]);
  EXPECT_EQ(precision_at_k(half, v, 10), 0.5);
  for (std::size_t k = 1; k <= 20; ++k) EXPECT_EQ(precision_at_k(rev, rev, k), 1.0);
  EXPECT_EQ(precision_at_k(v, v, 50), 1.0);  // k clamped to the length
}

TEST(PrecisionTest, TiesBreakByPosition) {
  const std::vector<double> pred = {0.5, 0.5, 0.5, 0.1};
  const std::vector<double> truth = {0.9, 0.1, 0.1, 0.0};
  EXPECT_EQ(precision_at_k(pred, truth, 1), 1.0);
}

TEST(AucTest, Examples) {
  const std::vector<double> s = {0.1, 0.2, 0.8, 0.9};
  const std::vector<int> y = {0, 0, 1, 1};
  EXPECT_EQ(auc(s, y), 1.0);
  const std::vector<double> flat(4, 0.3);
  EXPECT_EQ(auc(flat, y), 0.5);
  const std::vector<int> one_class = {1, 1, 1, 1};
  EXPECT_THROW(auc(s, one_class), Error);
  const std::vector<int> bad = {0, 2, 1, 1};
  EXPECT_THROW(auc(s, bad), Error);
}

TEST(AucTest, AgreesWithTrapezoidalRoc) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> coarse(0, 6);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(20);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      y[i] = static_cast<int>(i % 2);
      s[i] = coarse(rng) * 0.1 + 0.15 * y[i];  // plenty of ties
    }
    std::shuffle(y.begin(), y.end(), rng);
    EXPECT_NEAR(auc(s, y), trapezoid_auc(s, y), 1e-12);
    std::vector<double> g(s);
    for (auto& v : g) v = std::atan(5.0 * v) - 3.0;
    EXPECT_NEAR(auc(s, y), auc(g, y), 1e-15);
  }
}

struct Fixture {
  GraphSet graphs;
  PreparedSet prepared;
  ModelParams params;
  std::vector<LabeledPair> pairs;
};

Fixture make_fixture() {
  Fixture f;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 6; ++i) f.graphs.add(testing::random_graph(rng, 2, 6, 0.4, 3, "g" + std::to_string(i)));
  f.prepared = prepare_all(f.graphs);
  ModelConfig c;
  c.hidden_dim = 8;
  c.heads = 2;
  c.transformer_layers = 1;
  f.params = ModelParams::initialize(resolve_model_config(c, f.graphs));
  for (int q = 0; q < 2; ++q) {
    for (int c2 = 0; c2 < 6; ++c2) {
      if (c2 == q) continue;
      const Graph& a = f.graphs.graphs()[q];
      const Graph& b = f.graphs.graphs()[c2];
      f.pairs.push_back({a.id(), b.id(), nmcs(a, b, testing::brute_force_mcs(a, b)), Metric::kMcs, Split::kTest});
    }
  }
  return f;
}

TEST(RankingTest, GroupsByQueryAndOrdersByPrediction) {
  const auto f = make_fixture();
  const auto summary = rank_queries(f.params, f.prepared, f.pairs, 3);
  ASSERT_EQ(summary.queries.size(), 2u);
  const auto preds = predict(f.params, f.prepared, f.pairs);
  double rho_total = 0.0;
  for (const auto& q : summary.queries) {
    EXPECT_EQ(q.candidates.size(), 5u);
    EXPECT_TRUE(std::is_sorted(q.predicted.begin(), q.predicted.end(), std::greater<>()));
    EXPECT_NEAR(q.rho, spearman_rho(q.predicted, q.truth), 1e-15);
    rho_total += q.rho;
  }
  EXPECT_NEAR(summary.mean_rho, rho_total / 2.0, 1e-15);
  std::vector<double> truth;
  for (const auto& p : f.pairs) truth.push_back(p.label);
  EXPECT_NEAR(summary.mse, mse_metric(preds, truth), 1e-15);
  EXPECT_NEAR(summary.global_rho, spearman_rho(preds, truth), 1e-15);
}

TEST(EvaluatePairsTest, RegressionAndClassificationKeys) {
  auto f = make_fixture();
  const auto reg = evaluate_pairs(f.params, f.prepared, f.pairs);
  for (const char* key : {"mse", "rho", "rho_global", "p@10", "p@20", "queries", "pairs"}) {
    EXPECT_EQ(reg.count(key), 1u) << key;
  }
  EXPECT_EQ(reg.at("pairs"), 10.0);
  auto cls = f.pairs;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    cls[i].metric = Metric::kClass;
    cls[i].label = static_cast<double>(i % 2);
  }
  const auto c = evaluate_pairs(f.params, f.prepared, cls);
  for (const char* key : {"auc", "accuracy", "bce", "pairs"}) EXPECT_EQ(c.count(key), 1u) << key;
  EXPECT_GE(c.at("auc"), 0.0);
  EXPECT_LE(c.at("auc"), 1.0);
}

TEST(WritersTest, FilesHaveExpectedHeaders) {
  const auto f = make_fixture();
  const auto dir = fs::temp_directory_path() / "infmcs_evaluation_test";
  fs::create_directories(dir);
  const auto preds = predict(f.params, f.prepared, f.pairs);
  write_predictions_csv(dir / "p.csv", f.pairs, preds);
  write_ranking_csv(dir / "r.csv", rank_queries(f.params, f.prepared, f.pairs));
  write_summary_json(dir / "s.json", {{"mse", 0.5}});
  export_pe(f.params, dir / "pe.csv");
  auto first_line = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
  };
  EXPECT_EQ(first_line(dir / "p.csv"), "g1,g2,label,prediction");
  EXPECT_EQ(first_line(dir / "pe.csv").rfind("index,v0,v1", 0), 0u);
  std::ifstream pe(dir / "pe.csv");
  std::size_t rows = 0;
  for (std::string line; std::getline(pe, line);) ++rows;
  EXPECT_EQ(rows, f.params.config.pe_dict_size + 1);
}

TEST(BenchTest, ReportsEveryMethod) {
  const auto f = make_fixture();
  BenchOptions options;
  options.budget_seconds = 5.0;
  const auto rows = bench_runtime(f.params, f.graphs, f.pairs, options);
  std::vector<std::string> names;
  for (const auto& r : rows) {
    names.push_back(r.method);
    EXPECT_EQ(r.pairs, f.pairs.size());
    EXPECT_GE(r.mean_seconds, 0.0);
    EXPECT_EQ(r.timeouts, 0u);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"model", "mcs_exact", "ged_astar", "ged_beam", "ged_hungarian"}));
}

}  // namespace
}  // namespace infmcs
