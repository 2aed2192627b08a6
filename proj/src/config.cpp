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

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "infmcs/config.hpp"
#include "infmcs/error.hpp"

namespace infmcs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& j, const std::string& section, const std::set<std::string>& known) {
  if (!j.is_object()) throw BadInput("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw BadInput("unknown config key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

LabelOptions OracleConfig::label_options() const {
  LabelOptions o;
  o.mcs_budget_seconds = mcs_budget_seconds;
  o.label_aware = label_aware;
  o.ged.astar_budget_seconds = astar_budget_seconds;
  o.ged.beam_width = beam_width;
  o.jobs = jobs;
  return o;
}

RunConfig run_config_from_json(const std::string& text) {
  RunConfig c;
  try {
    const json doc = json::parse(text);
    reject_unknown(doc, "<root>", {"model", "train", "oracle", "paths"});
    if (doc.contains("model")) {
      const auto& m = doc.at("model");
      reject_unknown(m, "model",
                     {"hidden_dim", "gcn_layers", "transformer_layers", "heads", "pe_dict_size", "mlp_hidden_dim",
                      "label_vocab_size", "tau_init", "seed"});
      read(m, "hidden_dim", c.model.hidden_dim);
      read(m, "gcn_layers", c.model.gcn_layers);
      read(m, "transformer_layers", c.model.transformer_layers);
      read(m, "heads", c.model.heads);
      read(m, "pe_dict_size", c.model.pe_dict_size);
      read(m, "mlp_hidden_dim", c.model.mlp_hidden_dim);
      read(m, "label_vocab_size", c.model.label_vocab_size);
      read(m, "tau_init", c.model.tau_init);
      read(m, "seed", c.model.seed);
    }
    if (doc.contains("train")) {
      const auto& t = doc.at("train");
      reject_unknown(t, "train",
                     {"epochs", "batch_size", "seed", "task", "learning_rate", "grad_clip", "checkpoint_dir"});
      read(t, "epochs", c.train.epochs);
      read(t, "batch_size", c.train.batch_size);
      read(t, "seed", c.train.seed);
      if (t.contains("task")) c.train.task = task_from_string(t.at("task").get<std::string>());
      read(t, "learning_rate", c.train.learning_rate);
      read(t, "grad_clip", c.train.grad_clip);
      if (t.contains("checkpoint_dir")) c.train.checkpoint_dir = t.at("checkpoint_dir").get<std::string>();
    }
    if (doc.contains("oracle")) {
      const auto& o = doc.at("oracle");
      reject_unknown(o, "oracle", {"mcs_budget_seconds", "astar_budget_seconds", "beam_width", "label_aware", "jobs"});
      read(o, "mcs_budget_seconds", c.oracle.mcs_budget_seconds);
      read(o, "astar_budget_seconds", c.oracle.astar_budget_seconds);
      read(o, "beam_width", c.oracle.beam_width);
      read(o, "label_aware", c.oracle.label_aware);
      read(o, "jobs", c.oracle.jobs);
    }
    if (doc.contains("paths")) {
      const auto& p = doc.at("paths");
      reject_unknown(p, "paths", {"manifest", "out"});
      if (p.contains("manifest")) c.manifest = p.at("manifest").get<std::string>();
      if (p.contains("out")) c.out = p.at("out").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw BadInput(std::string("malformed config: ") + e.what());
  }
  c.model.validate();
  if (c.train.epochs == 0 || c.train.batch_size == 0) throw BadInput("train.epochs and train.batch_size must be at least 1");
  return c;
}

std::string run_config_to_json(const RunConfig& c) {
  ordered_json doc;
  doc["model"] = {{"hidden_dim", c.model.hidden_dim},
                  {"gcn_layers", c.model.gcn_layers},
                  {"transformer_layers", c.model.transformer_layers},
                  {"heads", c.model.heads},
                  {"pe_dict_size", c.model.pe_dict_size},
                  {"mlp_hidden_dim", c.model.mlp_hidden_dim},
                  {"label_vocab_size", c.model.label_vocab_size},
                  {"tau_init", c.model.tau_init},
                  {"seed", c.model.seed}};
  doc["train"] = {{"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"seed", c.train.seed},
                  {"task", std::string(to_string(c.train.task))},
                  {"learning_rate", c.train.learning_rate},
                  {"grad_clip", c.train.grad_clip},
                  {"checkpoint_dir", c.train.checkpoint_dir.string()}};
  doc["oracle"] = {{"mcs_budget_seconds", c.oracle.mcs_budget_seconds},
                   {"astar_budget_seconds", c.oracle.astar_budget_seconds},
                   {"beam_width", c.oracle.beam_width},
                   {"label_aware", c.oracle.label_aware},
                   {"jobs", c.oracle.jobs}};
  doc["paths"] = {{"manifest", c.manifest.string()}, {"out", c.out.string()}};
  return doc.dump(2);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json(buffer.str());
}

RunConfig resolve_run_config(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return load_run_config(*explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') return load_run_config(env);
  return RunConfig{};
}

}  // namespace infmcs
