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
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "infmcs/error.hpp"
#include "infmcs/trainer.hpp"

namespace infmcs {

namespace {

const PreparedGraph& lookup(const PreparedSet& graphs, const std::string& id) {
  auto it = graphs.find(id);
  if (it == graphs.end()) throw BadInput("pair references unknown graph '" + id + "'");
  return it->second;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericFailure(std::string("non-finite ") + what);
}

std::vector<Tensor> parameter_list(const ModelParams& params) {
  std::vector<Tensor> out;
  for (auto& [name, t] : params.named_parameters()) out.push_back(t);
  return out;
}

}  // namespace

PreparedSet prepare_all(const GraphSet& graphs) {
  PreparedSet out;
  for (const auto& g : graphs.graphs()) out.emplace(g.id(), prepare_graph(g));
  return out;
}

ModelConfig resolve_model_config(ModelConfig config, const GraphSet& graphs) {
  const std::size_t max_nodes = graphs.max_node_count();
  const std::size_t vocab = graphs.size() == 0 ? 1 : static_cast<std::size_t>(graphs.max_label()) + 1;
  if (config.pe_dict_size == 0) {
    config.pe_dict_size = max_nodes + 16;
  } else if (config.pe_dict_size < max_nodes) {
    throw BadInput("pe_dict_size " + std::to_string(config.pe_dict_size) + " is smaller than the largest graph (" +
                   std::to_string(max_nodes) + " nodes)");
  }
  if (config.label_vocab_size == 0) {
    config.label_vocab_size = vocab;
  } else if (config.label_vocab_size < vocab) {
    throw BadInput("label_vocab_size " + std::to_string(config.label_vocab_size) + " does not cover label " +
                   std::to_string(vocab - 1));
  }
  return config;
}

std::vector<double> predict(const ModelParams& params, const PreparedSet& graphs,
                            const std::vector<LabeledPair>& pairs) {
  ad::NoGradGuard no_grad;
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const double y = forward(lookup(graphs, p.g1_id), lookup(graphs, p.g2_id), params).yhat.item();
    require_finite(y, "prediction");
    out.push_back(y);
  }
  return out;
}

double evaluate_loss(const ModelParams& params, const PreparedSet& graphs, const std::vector<LabeledPair>& pairs,
                     Task task) {
  if (pairs.empty()) throw BadInput("evaluate_loss: no pairs");
  ad::NoGradGuard no_grad;
  double total = 0.0;
  for (const auto& p : pairs) {
    auto r = forward(lookup(graphs, p.g1_id), lookup(graphs, p.g2_id), params);
    total += pair_loss(r.yhat, p.label, task).item();
  }
  const double mean = total / static_cast<double>(pairs.size());
  require_finite(mean, "loss");
  return mean;
}

void check_task(const std::vector<LabeledPair>& pairs, Task task) {
  for (const auto& p : pairs) {
    const bool is_class = p.metric == Metric::kClass;
    if (is_class != (task == Task::kClassification)) {
      throw BadInput("pair (" + p.g1_id + ", " + p.g2_id + ") has metric " + std::string(to_string(p.metric)) +
                     " which does not fit task " + std::string(to_string(task)));
    }
  }
}

TrainResult train_model(ModelParams& params, const PreparedSet& graphs, const std::vector<LabeledPair>& train,
                        const std::vector<LabeledPair>& valid, const TrainConfig& config,
                        const std::function<void(const EpochLog&, const ModelParams&)>& on_epoch) {
  if (train.empty()) throw BadInput("training split has no pairs");
  if (config.epochs == 0 || config.batch_size == 0) throw BadInput("epochs and batch_size must be at least 1");
  check_task(train, config.task);
  check_task(valid, config.task);

  const auto param_list = parameter_list(params);
  Adam optimizer(param_list, AdamConfig{.learning_rate = config.learning_rate});
  Rng rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.best_valid_loss = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double weight = 1.0 / static_cast<double>(end - begin);
      optimizer.zero_grad();
      for (std::size_t k = begin; k < end; ++k) {
        const auto& p = train[order[k]];
        auto r = forward(lookup(graphs, p.g1_id), lookup(graphs, p.g2_id), params);
        Tensor loss = pair_loss(r.yhat, p.label, config.task);
        require_finite(loss.item(), "training loss");
        epoch_loss += loss.item();
        ad::backward(ad::scale(loss, weight));
      }
      if (config.grad_clip > 0.0) clip_grad_norm(param_list, config.grad_clip);
      optimizer.step();
    }
    optimizer.zero_grad();

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = epoch_loss / static_cast<double>(train.size());
    log.valid_loss = valid.empty() ? log.train_loss : evaluate_loss(params, graphs, valid, config.task);
    log.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back(log);
    if (log.valid_loss < result.best_valid_loss) {
      result.best_valid_loss = log.valid_loss;
      result.best_epoch = epoch;
      result.best = params.clone();
    }
    if (on_epoch) on_epoch(log, params);
  }
  return result;
}

std::filesystem::path train(const DatasetManifest& manifest, const ModelConfig& model_config,
                            const TrainConfig& config) {
  if (config.checkpoint_dir.empty()) throw BadInput("train: no checkpoint directory given");
  LoadedDataset data = load_dataset(manifest);
  ModelParams params = ModelParams::initialize(resolve_model_config(model_config, data.graphs));
  const PreparedSet prepared = prepare_all(data.graphs);

  const auto dir = config.checkpoint_dir;
  std::filesystem::create_directories(dir);
  std::ofstream log(dir / "train_log.csv");
  if (!log) throw BadInput("cannot write " + (dir / "train_log.csv").string());
  log << "epoch,train_loss,valid_loss,wall_seconds\n";
  double best = std::numeric_limits<double>::infinity();
  train_model(params, prepared, data.train, data.valid, config, [&](const EpochLog& e, const ModelParams& p) {
    log << e.epoch << ',' << e.train_loss << ',' << e.valid_loss << ',' << e.wall_seconds << '\n' << std::flush;
    save_checkpoint(dir / "last.json", p);
    if (e.valid_loss < best) {
      best = e.valid_loss;
      save_checkpoint(dir / "best.json", p);
    }
  });
  return dir / "best.json";
}

}  // namespace infmcs
