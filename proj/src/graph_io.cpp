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

#include <json.hpp>

#include "infmcs/error.hpp"
#include "infmcs/graph.hpp"

namespace infmcs {

std::string graph_to_json_line(const Graph& g) {
  nlohmann::ordered_json j;
  j["id"] = g.id();
  j["n"] = g.node_count();
  j["labels"] = std::vector<LabelId>(g.labels().begin(), g.labels().end());
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j.dump();
}

Graph graph_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw BadInput(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw BadInput("graph record is not an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "id" && key != "n" && key != "labels" && key != "edges") {
      throw BadInput("unknown graph field '" + key + "'");
    }
  }
  if (!j.contains("id") || !j["id"].is_string()) throw BadInput("graph record needs string 'id'");
  if (!j.contains("n") || !j["n"].is_number_unsigned()) {
    throw BadInput("graph record needs non-negative integer 'n'");
  }
  if (!j.contains("labels") || !j["labels"].is_array()) throw BadInput("graph record needs 'labels' array");
  if (!j.contains("edges") || !j["edges"].is_array()) throw BadInput("graph record needs 'edges' array");

  const auto n = j["n"].get<std::size_t>();
  std::vector<LabelId> labels;
  labels.reserve(j["labels"].size());
  for (const auto& l : j["labels"]) {
    if (!l.is_number_integer()) throw BadInput("graph label is not an integer");
    labels.push_back(l.get<LabelId>());
  }
  std::vector<Edge> edges;
  edges.reserve(j["edges"].size());
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw BadInput("graph edge must be a pair of non-negative integers");
    }
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
  }
  return Graph(j["id"].get<std::string>(), n, std::move(edges), std::move(labels));
}

}  // namespace infmcs
