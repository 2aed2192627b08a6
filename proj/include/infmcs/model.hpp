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
#include <string>
#include <utility>
#include <vector>

#include "infmcs/graph.hpp"
#include "infmcs/tensor.hpp"

namespace infmcs {

using ad::Tensor;

struct ModelConfig {
  std::size_t hidden_dim = 128;
  std::size_t gcn_layers = 3;
  std::size_t transformer_layers = 2;
  std::size_t heads = 8;
  std::size_t pe_dict_size = 0;    // must exceed the largest graph; 0 = auto
  std::size_t mlp_hidden_dim = 0;  // 0: same as hidden_dim
  std::size_t label_vocab_size = 0;  // 0 = auto
  double tau_init = 0.5;
  std::uint64_t seed = 0;

  std::size_t mlp_width() const { return mlp_hidden_dim == 0 ? hidden_dim : mlp_hidden_dim; }
  std::size_t head_dim() const { return hidden_dim / heads; }
  /// Throws on inconsistent values (e.g. heads not dividing hidden_dim).
  /// Automatic (zero) sizes are accepted here.
  void validate() const;
};

struct GcnLayerParams {
  Tensor weight;  // d_in x d
  Tensor bias;    // d
};

struct TransformerLayerParams {
  std::vector<Tensor> query;  // per head, d x d_k
  std::vector<Tensor> key;
  std::vector<Tensor> value;
  Tensor output;              // d x d
  Tensor norm_gain;
  Tensor norm_bias;
  Tensor ffn_in;              // d x d
  Tensor ffn_in_bias;
  Tensor ffn_out;             // d x d
  Tensor ffn_out_bias;
};

struct ModelParams {
  ModelConfig config;
  Tensor embedding;  // label_vocab_size x d
  std::vector<GcnLayerParams> gcn;
  Tensor positional;  // pe_dict_size x d
  std::vector<TransformerLayerParams> transformer;
  Tensor mlp_in;      // 2d x hidden
  Tensor mlp_in_bias;
  Tensor mlp_out;     // hidden x 1
  Tensor mlp_out_bias;
  Tensor theta;       // tau = sigmoid(theta)

  /// Fresh parameters: weights uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)),
  /// positional dictionary normal(0, 0.02), layer-norm gain 1 and bias 0.
  static ModelParams initialize(const ModelConfig& config);

  /// Stable order; names are unique and used as checkpoint keys.
  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
  std::size_t parameter_count() const;
  /// Deep copy; the result shares no storage with *this.
  ModelParams clone() const;
  double tau() const;
};

/// Per-graph data the forward pass needs, computed once per graph.
struct PreparedGraph {
  std::string id;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::vector<std::size_t> labels;
  std::vector<std::size_t> ranks;   // centrality ordering
  ad::SparseRows propagation;       // symmetric-normalised A + I
};

PreparedGraph prepare_graph(const Graph& g);

/// Orders graphs by (node count, edge count, id); the smaller one plays G1.
bool plays_first(const PreparedGraph& a, const PreparedGraph& b);

Tensor featurize(const PreparedGraph& g, const ModelParams& params);
Tensor gcn_layer(const Tensor& features, const PreparedGraph& g, const GcnLayerParams& layer);
Tensor transformer_layer(const Tensor& h, const TransformerLayerParams& layer);
Tensor encode_graph(const PreparedGraph& g, const ModelParams& params);

struct CrossMatch {
  Tensor attention;  // |V1| x |V2|
  Tensor matched;    // |V1| x d
};

/// Cosine-similarity attention from G1 rows onto G2 rows, sharpened by 1/tau.
CrossMatch cross_match(const Tensor& h1, const Tensor& h2, const Tensor& tau);

/// sigmoid(MLP(h1 || matched)), one score per G1 node (|V1| x 1).
Tensor matching_scores(const Tensor& h1, const Tensor& matched, const ModelParams& params);

struct ForwardResult {
  Tensor yhat;         // 1 element
  Tensor scores;       // |V1| x 1
  Tensor attention;    // |V1| x |V2|
  bool a_is_first = true;  // role map: whether argument `a` played G1
};

ForwardResult forward(const PreparedGraph& a, const PreparedGraph& b, const ModelParams& params);
ForwardResult forward(const Graph& a, const Graph& b, const ModelParams& params);

enum class Task { kRegression, kClassification };
std::string_view to_string(Task t);
Task task_from_string(std::string_view s);

/// MSE for regression, binary cross-entropy for classification.
Tensor pair_loss(const Tensor& yhat, double target, Task task);

// Checkpoints: one JSON document with the config and every tensor.
// Doubles are written in shortest round-trip form, so reloading is exact.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

/// Throws NumericFailure naming the first non-finite parameter.
void check_finite(const ModelParams& params);

}  // namespace infmcs
