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

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "infmcs/error.hpp"
#include "infmcs/model.hpp"

namespace infmcs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kFormat = "infmcs-checkpoint";
constexpr int kVersion = 1;

ordered_json config_to_json(const ModelConfig& c) {
  ordered_json j;
  j["hidden_dim"] = c.hidden_dim;
  j["gcn_layers"] = c.gcn_layers;
  j["transformer_layers"] = c.transformer_layers;
  j["heads"] = c.heads;
  j["pe_dict_size"] = c.pe_dict_size;
  j["mlp_hidden_dim"] = c.mlp_hidden_dim;
  j["label_vocab_size"] = c.label_vocab_size;
  j["tau_init"] = c.tau_init;
  j["seed"] = c.seed;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.gcn_layers = j.at("gcn_layers").get<std::size_t>();
  c.transformer_layers = j.at("transformer_layers").get<std::size_t>();
  c.heads = j.at("heads").get<std::size_t>();
  c.pe_dict_size = j.at("pe_dict_size").get<std::size_t>();
  c.mlp_hidden_dim = j.at("mlp_hidden_dim").get<std::size_t>();
  c.label_vocab_size = j.at("label_vocab_size").get<std::size_t>();
  c.tau_init = j.at("tau_init").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  check_finite(params);
  ordered_json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["config"] = config_to_json(params.config);
  ordered_json tensors = ordered_json::object();
  for (const auto& [name, t] : params.named_parameters()) {
    ordered_json entry;
    entry["shape"] = t.shape();
    entry["values"] = std::vector<double>(t.values().begin(), t.values().end());
    tensors[name] = std::move(entry);
  }
  doc["params"] = std::move(tensors);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // Write-then-rename so a crash never leaves a truncated checkpoint.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw BadInput("cannot write checkpoint " + tmp.string());
    out << doc.dump() << '\n';
    if (!out) throw BadInput("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open checkpoint " + path.string());
  json doc;
  try {
    doc = json::parse(in);
    if (doc.at("format").get<std::string>() != kFormat || doc.at("version").get<int>() != kVersion) {
      throw BadInput(path.string() + " is not a version " + std::to_string(kVersion) + " checkpoint");
    }
    ModelParams params = ModelParams::initialize(config_from_json(doc.at("config")));
    const auto& tensors = doc.at("params");
    auto named = params.named_parameters();
    if (tensors.size() != named.size()) {
      throw BadInput(path.string() + ": expected " + std::to_string(named.size()) + " tensors, found " +
                     std::to_string(tensors.size()));
    }
    for (auto& [name, t] : named) {
      if (!tensors.contains(name)) throw BadInput(path.string() + ": missing tensor " + name);
      const auto& entry = tensors.at(name);
      if (entry.at("shape").get<ad::Shape>() != t.shape()) {
        throw BadInput(path.string() + ": tensor " + name + " has shape " +
                       ad::shape_string(entry.at("shape").get<ad::Shape>()) + ", config implies " +
                       ad::shape_string(t.shape()));
      }
      const auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != t.size()) throw BadInput(path.string() + ": tensor " + name + " has wrong length");
      std::copy(values.begin(), values.end(), t.mutable_values().begin());
    }
    return params;
  } catch (const json::exception& e) {
    throw BadInput(path.string() + ": malformed checkpoint: " + e.what());
  }
}

}  // namespace infmcs
