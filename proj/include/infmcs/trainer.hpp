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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "infmcs/dataset.hpp"
#include "infmcs/model.hpp"

namespace infmcs {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam over a fixed parameter list. Parameters without a
/// gradient are treated as having a zero gradient.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig config = {});

  void step();
  void zero_grad();
  std::size_t step_count() const noexcept { return steps_; }
  const std::vector<std::vector<double>>& first_moments() const noexcept { return m_; }
  const std::vector<std::vector<double>>& second_moments() const noexcept { return v_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::size_t steps_ = 0;
};

/// Scales all gradients so their joint L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
double clip_grad_norm(const std::vector<Tensor>& params, double max_norm);

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
  Task task = Task::kRegression;
  double learning_rate = 1e-3;
  double grad_clip = 0.0;  // 0 disables clipping
  std::filesystem::path checkpoint_dir;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double wall_seconds = 0.0;
};

using PreparedSet = std::unordered_map<std::string, PreparedGraph>;

PreparedSet prepare_all(const GraphSet& graphs);

/// Fills the automatic fields of `config` from a dataset: pe_dict_size
/// becomes the largest graph + 16 and label_vocab_size the largest label + 1.
/// Explicit values that are too small for the data are rejected.
ModelConfig resolve_model_config(ModelConfig config, const GraphSet& graphs);

/// Model similarity for every pair, in order. No tape is recorded.
std::vector<double> predict(const ModelParams& params, const PreparedSet& graphs,
                            const std::vector<LabeledPair>& pairs);

/// Mean loss over `pairs`.
double evaluate_loss(const ModelParams& params, const PreparedSet& graphs,
                     const std::vector<LabeledPair>& pairs, Task task);

struct TrainResult {
  ModelParams best;
  std::size_t best_epoch = 0;
  double best_valid_loss = 0.0;
  std::vector<EpochLog> log;
};

/// Throws when the pair labels do not fit the task (class labels for
/// regression or similarity labels for classification).
void check_task(const std::vector<LabeledPair>& pairs, Task task);

/// Trains `params` in place. Each epoch shuffles the training pairs, takes
/// one Adam step per batch on the mean per-pair gradient and scores the
/// validation pairs; `best` holds the parameters of the epoch with the lowest
/// validation loss (training loss when there are no validation pairs).
/// `on_epoch` runs after every epoch with the freshly updated parameters.
TrainResult train_model(ModelParams& params, const PreparedSet& graphs, const std::vector<LabeledPair>& train,
                        const std::vector<LabeledPair>& valid, const TrainConfig& config,
                        const std::function<void(const EpochLog&, const ModelParams&)>& on_epoch = {});

/// File-based training: loads the manifest's dataset, writes last.json,
/// best.json and train_log.csv into config.checkpoint_dir and returns the
/// best checkpoint path.
std::filesystem::path train(const DatasetManifest& manifest, const ModelConfig& model_config,
                            const TrainConfig& config);

}  // namespace infmcs
