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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "brute_force.hpp"
#include "infmcs/error.hpp"
#include "infmcs/trainer.hpp"

namespace infmcs {
namespace {

namespace fs = std::filesystem;

std::vector<double> to_vector(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  Tensor w = Tensor::from({2}, {0.3, -0.7}, true);
  Adam adam({w});
  w.mutable_grad();  // allocate zeros
  adam.step();
  EXPECT_EQ(to_vector(w), (std::vector<double>{0.3, -0.7}));
  EXPECT_EQ(adam.step_count(), 1u);
  adam.step();  // no gradient at all also counts as zero
  EXPECT_EQ(to_vector(w), (std::vector<double>{0.3, -0.7}));
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  for (double g : {1e-3, 0.5, -4.0, 250.0}) {
    Tensor w = Tensor::scalar(1.0, true);
    Adam adam({w});
    w.mutable_grad()[0] = g;
    adam.step();
    // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
    EXPECT_NEAR(w.item(), 1.0 - 1e-3 * g / (std::abs(g) + 1e-8), 1e-15) << g;
    EXPECT_EQ(adam.first_moments()[0].size(), 1u);
  }
}

TEST(AdamTest, MatchesReferenceRecurrence) {
  Tensor w = Tensor::scalar(0.0, true);
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  Adam adam({w}, cfg);
  double m = 0.0, v = 0.0, x = 0.0;
  for (int t = 1; t <= 20; ++t) {
    const double g = 2.0 * (x - 3.0);
    w.zero_grad();
    w.mutable_grad()[0] = g;
    adam.step();
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    x -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    EXPECT_NEAR(w.item(), x, 1e-14);
  }
}

TEST(ClipTest, ScalesToMaxNorm) {
  Tensor a = Tensor::from({2}, {0.0, 0.0}, true);
  Tensor b = Tensor::scalar(0.0, true);
  a.mutable_grad()[0] = 3.0;
  b.mutable_grad()[0] = 4.0;
  EXPECT_DOUBLE_EQ(clip_grad_norm({a, b}, 1.0), 5.0);
  EXPECT_NEAR(a.grad()[0], 0.6, 1e-15);
  EXPECT_NEAR(b.grad()[0], 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(clip_grad_norm({a, b}, 10.0), 1.0);
  EXPECT_NEAR(a.grad()[0], 0.6, 1e-15);
}

struct TinyData {
  GraphSet graphs;
  PreparedSet prepared;
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> valid;
};

TinyData tiny_data(std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TinyData d;
  for (std::size_t i = 0; i < 2 * pairs; ++i) {
    d.graphs.add(testing::random_graph(rng, 2, 7, 0.4, 3, "g" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    const Graph& a = d.graphs.graphs()[2 * i];
    const Graph& b = d.graphs.graphs()[2 * i + 1];
    LabeledPair p{a.id(), b.id(), nmcs(a, b, testing::brute_force_mcs(a, b)), Metric::kMcs, Split::kTrain};
    (i % 5 == 4 ? d.valid : d.train).push_back(p);
  }
  d.prepared = prepare_all(d.graphs);
  return d;
}

ModelConfig tiny_model(const GraphSet& graphs) {
  ModelConfig c;
  c.hidden_dim = 16;
  c.heads = 4;
  c.transformer_layers = 1;
  c.seed = 3;
  return resolve_model_config(c, graphs);
}

TEST(ResolveConfigTest, AutoSizesAndRejectsTooSmall) {
  const auto d = tiny_data(6, 1);
  ModelConfig c = tiny_model(d.graphs);
  EXPECT_EQ(c.pe_dict_size, d.graphs.max_node_count() + 16);
  EXPECT_EQ(c.label_vocab_size, static_cast<std::size_t>(d.graphs.max_label()) + 1);
  ModelConfig small;
  small.pe_dict_size = 2;
  EXPECT_THROW(resolve_model_config(small, d.graphs), Error);
}

TEST(TrainTest, DeterministicUnderSeed) {
  const auto d = tiny_data(20, 2);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.seed = 9;
  auto p1 = ModelParams::initialize(tiny_model(d.graphs));
  auto p2 = ModelParams::initialize(tiny_model(d.graphs));
  const auto r1 = train_model(p1, d.prepared, d.train, d.valid, cfg);
  const auto r2 = train_model(p2, d.prepared, d.train, d.valid, cfg);
  const auto n1 = p1.named_parameters();
  const auto n2 = p2.named_parameters();
  for (std::size_t i = 0; i < n1.size(); ++i) EXPECT_EQ(to_vector(n1[i].second), to_vector(n2[i].second));
  ASSERT_EQ(r1.log.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(r1.log[e].train_loss, r2.log[e].train_loss);
    EXPECT_EQ(r1.log[e].valid_loss, r2.log[e].valid_loss);
  }
  EXPECT_EQ(r1.best_epoch, r2.best_epoch);
}

TEST(TrainTest, RunningMinimumDecreasesOnOverfitSet) {
  const auto d = tiny_data(32, 3);
  TrainConfig cfg;
  cfg.epochs = 25;
  cfg.batch_size = 8;
  auto p = ModelParams::initialize(tiny_model(d.graphs));
  const double before = evaluate_loss(p, d.prepared, d.train, Task::kRegression);
  const auto r = train_model(p, d.prepared, d.train, {}, cfg);
  double running = std::numeric_limits<double>::infinity();
  for (const auto& e : r.log) running = std::min(running, e.train_loss);
  EXPECT_LT(running, r.log.front().train_loss);
  EXPECT_LT(evaluate_loss(r.best, d.prepared, d.train, Task::kRegression), before);
  // Without a validation split the best epoch is picked on training loss.
  EXPECT_DOUBLE_EQ(r.best_valid_loss, running);
}

TEST(TrainTest, BestParametersMatchBestEpoch) {
  const auto d = tiny_data(20, 4);
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 5;
  auto p = ModelParams::initialize(tiny_model(d.graphs));
  const auto r = train_model(p, d.prepared, d.train, d.valid, cfg);
  EXPECT_DOUBLE_EQ(evaluate_loss(r.best, d.prepared, d.valid, Task::kRegression), r.best_valid_loss);
  EXPECT_EQ(r.log[r.best_epoch - 1].valid_loss, r.best_valid_loss);
}

TEST(TrainTest, RejectsBadInputs) {
  const auto d = tiny_data(5, 5);
  auto p = ModelParams::initialize(tiny_model(d.graphs));
  TrainConfig cfg;
  EXPECT_THROW(train_model(p, d.prepared, {}, d.valid, cfg), Error);
  cfg.batch_size = 0;
  EXPECT_THROW(train_model(p, d.prepared, d.train, d.valid, cfg), Error);
  cfg.batch_size = 2;
  cfg.task = Task::kClassification;
  EXPECT_THROW(train_model(p, d.prepared, d.train, d.valid, cfg), Error);
  std::vector<LabeledPair> cls = {{"g0", "g1", 1.0, Metric::kClass, Split::kTrain}};
  EXPECT_THROW(check_task(cls, Task::kRegression), Error);
  EXPECT_NO_THROW(check_task(cls, Task::kClassification));
}

TEST(TrainTest, FileBasedRunWritesLogAndCheckpoints) {
  const auto dir = fs::temp_directory_path() / "infmcs_trainer_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  LabeledPoolParams pool;
  pool.count = 20;
  pool.max_nodes = 6;
  const auto graphs = generate_labeled_pool(pool);
  std::vector<std::string> ids;
  for (const auto& g : graphs) ids.push_back(g.id());
  DatasetManifest m;
  m.graph_path = dir / "graphs.jsonl";
  m.label_cache_path = dir / "labels.jsonl";
  m.splits = split_dataset(ids, {0.8, 0.1, 0.1}, 0);
  m.pairing.train_count = 20;
  m.pairing.valid_count = 1;
  m.pairing.test_count = 1;
  save_graphs(m.graph_path, graphs);
  LabelCache cache(m.label_cache_path);
  label_pairs(make_pairs(m), GraphSet(graphs), Metric::kMcs, {}, cache);

  ModelConfig mc;
  mc.hidden_dim = 8;
  mc.heads = 2;
  mc.transformer_layers = 1;
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  cfg.checkpoint_dir = dir / "run";
  const auto best = train(m, mc, cfg);
  EXPECT_EQ(best, dir / "run" / "best.json");
  EXPECT_TRUE(fs::exists(dir / "run" / "last.json"));
  EXPECT_NO_THROW(load_checkpoint(best));
  std::ifstream log(dir / "run" / "train_log.csv");
  std::string header;
  std::getline(log, header);
  EXPECT_EQ(header, "epoch,train_loss,valid_loss,wall_seconds");
  int rows = 0;
  for (std::string line; std::getline(log, line);) ++rows;
  EXPECT_EQ(rows, 2);
}

}  // namespace
}  // namespace infmcs
