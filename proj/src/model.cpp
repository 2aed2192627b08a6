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
#include <random>

#include "infmcs/error.hpp"
#include "infmcs/model.hpp"

namespace infmcs {

namespace {

class ParamFactory {
 public:
  explicit ParamFactory(std::uint64_t seed) : rng_(seed) {}

  Tensor uniform(ad::Shape shape, std::size_t fan_in) {
    return ad::random_uniform(std::move(shape), 1.0 / std::sqrt(static_cast<double>(fan_in)), rng_(), true);
  }
  Tensor normal(ad::Shape shape, double stddev) {
    return ad::random_normal(std::move(shape), stddev, rng_(), true);
  }
  static Tensor constant(ad::Shape shape, double v) {
    return Tensor::from(shape, std::vector<double>(ad::shape_size(shape), v), true);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

void ModelConfig::validate() const {
  if (hidden_dim == 0) throw BadInput("hidden_dim must be positive");
  if (heads == 0 || hidden_dim % heads != 0) {
    throw BadInput("heads (" + std::to_string(heads) + ") must divide hidden_dim (" +
                   std::to_string(hidden_dim) + ")");
  }
  if (!(tau_init > 0.0 && tau_init < 1.0)) throw BadInput("tau_init must lie in (0, 1)");
}

ModelParams ModelParams::initialize(const ModelConfig& config) {
  config.validate();
  if (config.pe_dict_size == 0 || config.label_vocab_size == 0) {
    throw BadInput("pe_dict_size and label_vocab_size must be resolved (non-zero) before initialisation");
  }
  const std::size_t d = config.hidden_dim, dk = config.head_dim(), hidden = config.mlp_width();
  ParamFactory make(config.seed);
  ModelParams p;
  p.config = config;
  p.embedding = make.uniform({config.label_vocab_size, d}, config.label_vocab_size);
  for (std::size_t l = 0; l < config.gcn_layers; ++l) {
    p.gcn.push_back({make.uniform({d, d}, d), make.uniform({d}, d)});
  }
  p.positional = make.normal({config.pe_dict_size, d}, 0.02);
  for (std::size_t l = 0; l < config.transformer_layers; ++l) {
    TransformerLayerParams t;
    for (std::size_t h = 0; h < config.heads; ++h) {
      t.query.push_back(make.uniform({d, dk}, d));
      t.key.push_back(make.uniform({d, dk}, d));
      t.value.push_back(make.uniform({d, dk}, d));
    }
    t.output = make.uniform({d, d}, d);
    t.norm_gain = ParamFactory::constant({d}, 1.0);
    t.norm_bias = ParamFactory::constant({d}, 0.0);
    t.ffn_in = make.uniform({d, d}, d);
    t.ffn_in_bias = make.uniform({d}, d);
    t.ffn_out = make.uniform({d, d}, d);
    t.ffn_out_bias = make.uniform({d}, d);
    p.transformer.push_back(std::move(t));
  }
  p.mlp_in = make.uniform({2 * d, hidden}, 2 * d);
  p.mlp_in_bias = make.uniform({hidden}, 2 * d);
  p.mlp_out = make.uniform({hidden, 1}, hidden);
  p.mlp_out_bias = make.uniform({1}, hidden);
  p.theta = Tensor::scalar(std::log(config.tau_init / (1.0 - config.tau_init)), true);
  return p;
}

std::vector<std::pair<std::string, Tensor>> ModelParams::named_parameters() const {
  std::vector<std::pair<std::string, Tensor>> out;
  out.emplace_back("embedding", embedding);
  for (std::size_t l = 0; l < gcn.size(); ++l) {
    const std::string pre = "gcn." + std::to_string(l) + ".";
    out.emplace_back(pre + "weight", gcn[l].weight);
    out.emplace_back(pre + "bias", gcn[l].bias);
  }
  out.emplace_back("positional", positional);
  for (std::size_t l = 0; l < transformer.size(); ++l) {
    const auto& t = transformer[l];
    const std::string pre = "transformer." + std::to_string(l) + ".";
    for (std::size_t h = 0; h < t.query.size(); ++h) {
      const std::string hs = std::to_string(h);
      out.emplace_back(pre + "query." + hs, t.query[h]);
      out.emplace_back(pre + "key." + hs, t.key[h]);
      out.emplace_back(pre + "value." + hs, t.value[h]);
    }
    out.emplace_back(pre + "output", t.output);
    out.emplace_back(pre + "norm_gain", t.norm_gain);
    out.emplace_back(pre + "norm_bias", t.norm_bias);
    out.emplace_back(pre + "ffn_in", t.ffn_in);
    out.emplace_back(pre + "ffn_in_bias", t.ffn_in_bias);
    out.emplace_back(pre + "ffn_out", t.ffn_out);
    out.emplace_back(pre + "ffn_out_bias", t.ffn_out_bias);
  }
  out.emplace_back("mlp.in", mlp_in);
  out.emplace_back("mlp.in_bias", mlp_in_bias);
  out.emplace_back("mlp.out", mlp_out);
  out.emplace_back("mlp.out_bias", mlp_out_bias);
  out.emplace_back("theta", theta);
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : named_parameters()) n += t.size();
  return n;
}

ModelParams ModelParams::clone() const {
  ModelParams copy = initialize(config);
  auto dst = copy.named_parameters();
  auto src = named_parameters();
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::copy(src[i].second.values().begin(), src[i].second.values().end(),
              dst[i].second.mutable_values().begin());
  }
  return copy;
}

double ModelParams::tau() const { return 1.0 / (1.0 + std::exp(-theta.item())); }

void check_finite(const ModelParams& params) {
  for (const auto& [name, t] : params.named_parameters()) {
    for (double v : t.values()) {
      if (!std::isfinite(v)) throw NumericFailure("non-finite value in parameter " + name);
    }
  }
}

PreparedGraph prepare_graph(const Graph& g) {
  if (g.empty()) throw BadInput("graph '" + g.id() + "' is empty");
  PreparedGraph p;
  p.id = g.id();
  p.node_count = g.node_count();
  p.edge_count = g.edge_count();
  for (LabelId l : g.labels()) {
    if (l < 0) throw BadInput("graph '" + g.id() + "' has a negative label");
    p.labels.push_back(static_cast<std::size_t>(l));
  }
  p.ranks = node_ordering(g).ranks;
  auto& s = p.propagation;
  s.rows = s.cols = g.node_count();
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const double di = static_cast<double>(g.degree(i) + 1);
    // Self loop first, then neighbours in ascending order.
    s.columns.push_back(i);
    s.weights.push_back(1.0 / di);
    for (NodeId j : g.neighbors(i)) {
      const double dj = static_cast<double>(g.degree(j) + 1);
      s.columns.push_back(j);
      s.weights.push_back(1.0 / std::sqrt(di * dj));
    }
    s.offsets.push_back(s.columns.size());
  }
  return p;
}

bool plays_first(const PreparedGraph& a, const PreparedGraph& b) {
  if (a.node_count != b.node_count) return a.node_count < b.node_count;
  if (a.edge_count != b.edge_count) return a.edge_count < b.edge_count;
  return a.id <= b.id;
}

Tensor featurize(const PreparedGraph& g, const ModelParams& params) {
  for (std::size_t l : g.labels) {
    if (l >= params.config.label_vocab_size) {
      throw BadInput("graph '" + g.id + "' uses label " + std::to_string(l) + " but label_vocab_size is " +
                     std::to_string(params.config.label_vocab_size));
    }
  }
  return ad::row_gather(params.embedding, g.labels);
}

Tensor gcn_layer(const Tensor& features, const PreparedGraph& g, const GcnLayerParams& layer) {
  if (features.rank() != 2 || features.rows() != g.node_count) {
    throw BadInput("gcn_layer: features " + ad::shape_string(features.shape()) + " for a graph with " +
                   std::to_string(g.node_count) + " nodes");
  }
  return ad::relu(ad::sparse_matmul(g.propagation, ad::matmul(features, layer.weight)) + layer.bias);
}

Tensor transformer_layer(const Tensor& h, const TransformerLayerParams& layer) {
  const std::size_t heads = layer.query.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(layer.query.front().cols()));
  std::vector<Tensor> per_head;
  per_head.reserve(heads);
  for (std::size_t k = 0; k < heads; ++k) {
    Tensor q = ad::matmul(h, layer.query[k]);
    Tensor key = ad::matmul(h, layer.key[k]);
    Tensor v = ad::matmul(h, layer.value[k]);
    per_head.push_back(ad::matmul(ad::softmax_rows(ad::matmul_nt(q, key), scale), v));
  }
  Tensor attended = ad::matmul(ad::concat_cols(per_head), layer.output) + h;
  Tensor normed = ad::layer_norm(attended, layer.norm_gain, layer.norm_bias);
  Tensor ffn = ad::matmul(ad::relu(ad::matmul(normed, layer.ffn_in) + layer.ffn_in_bias), layer.ffn_out) +
               layer.ffn_out_bias;
  return ffn + attended;
}

Tensor encode_graph(const PreparedGraph& g, const ModelParams& params) {
  if (g.node_count > params.config.pe_dict_size) {
    throw BadInput("graph '" + g.id + "' has " + std::to_string(g.node_count) +
                   " nodes but pe_dict_size is " + std::to_string(params.config.pe_dict_size) +
                   "; increase pe_dict_size");
  }
  Tensor h = featurize(g, params);
  for (const auto& layer : params.gcn) h = gcn_layer(h, g, layer);
  h = h + ad::row_gather(params.positional, g.ranks);
  for (const auto& layer : params.transformer) h = transformer_layer(h, layer);
  return h;
}

CrossMatch cross_match(const Tensor& h1, const Tensor& h2, const Tensor& tau) {
  Tensor similarity = ad::matmul_nt(ad::l2_normalize_rows(h1), ad::l2_normalize_rows(h2));
  Tensor attention = ad::softmax_rows(similarity, ad::reciprocal(tau));
  return {attention, ad::matmul(attention, h2)};
}

Tensor matching_scores(const Tensor& h1, const Tensor& matched, const ModelParams& params) {
  const Tensor parts[] = {h1, matched};
  Tensor hidden = ad::relu(ad::matmul(ad::concat_cols(parts), params.mlp_in) + params.mlp_in_bias);
  return ad::sigmoid(ad::matmul(hidden, params.mlp_out) + params.mlp_out_bias);
}

ForwardResult forward(const PreparedGraph& a, const PreparedGraph& b, const ModelParams& params) {
  const bool a_first = plays_first(a, b);
  const PreparedGraph& g1 = a_first ? a : b;
  const PreparedGraph& g2 = a_first ? b : a;
  Tensor h1 = encode_graph(g1, params);
  Tensor h2 = encode_graph(g2, params);
  CrossMatch match = cross_match(h1, h2, ad::sigmoid(params.theta));
  Tensor scores = matching_scores(h1, match.matched, params);
  const double norm = 2.0 / static_cast<double>(g1.node_count + g2.node_count);
  return {ad::scale(ad::sum(scores), norm), scores, match.attention, a_first};
}

ForwardResult forward(const Graph& a, const Graph& b, const ModelParams& params) {
  return forward(prepare_graph(a), prepare_graph(b), params);
}

std::string_view to_string(Task t) { return t == Task::kRegression ? "regression" : "classification"; }

Task task_from_string(std::string_view s) {
  if (s == "regression") return Task::kRegression;
  if (s == "classification") return Task::kClassification;
  throw BadInput("unknown task '" + std::string(s) + "' (expected regression or classification)");
}

Tensor pair_loss(const Tensor& yhat, double target, Task task) {
  Tensor y = Tensor::scalar(target);
  return task == Task::kRegression ? ad::mse_loss(yhat, y) : ad::bce_loss(yhat, y);
}

}  // namespace infmcs
