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
#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "infmcs/dataset.hpp"

namespace infmcs {

using nlohmann::json;

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kMcs: return "mcs";
    case Metric::kGed: return "ged";
    case Metric::kClass: return "class";
  }
  return "mcs";
}

Metric metric_from_string(std::string_view s) {
  if (s == "mcs") return Metric::kMcs;
  if (s == "ged") return Metric::kGed;
  if (s == "class") return Metric::kClass;
  throw BadInput("unknown metric '" + std::string(s) + "' (expected mcs, ged or class)");
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "valid") return Split::kValid;
  if (s == "test") return Split::kTest;
  throw BadInput("unknown split '" + std::string(s) + "'");
}

void validate_label(const LabeledPair& pair) {
  const double y = pair.label;
  const bool ok = pair.metric == Metric::kClass ? (y == 0.0 || y == 1.0)
                                                : (std::isfinite(y) && y >= 0.0 && y <= 1.0);
  if (!ok) {
    throw BadInput("label " + std::to_string(y) + " out of range for metric " +
                   std::string(to_string(pair.metric)) + " (pair " + pair.g1_id + "," + pair.g2_id + ")");
  }
}

// ---------------------------------------------------------------------------

GraphSet::GraphSet(std::vector<Graph> graphs) {
  for (auto& g : graphs) add(std::move(g));
}

void GraphSet::add(Graph g) {
  if (index_.count(g.id()) != 0) throw BadInput("duplicate graph id '" + g.id() + "'");
  index_.emplace(g.id(), graphs_.size());
  graphs_.push_back(std::move(g));
}

const Graph& GraphSet::at(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw BadInput("unknown graph id '" + id + "'");
  return graphs_[it->second];
}

std::size_t GraphSet::max_node_count() const {
  std::size_t m = 0;
  for (const auto& g : graphs_) m = std::max(m, g.node_count());
  return m;
}

LabelId GraphSet::max_label() const {
  LabelId m = 0;
  for (const auto& g : graphs_) {
    for (LabelId l : g.labels()) m = std::max(m, l);
  }
  return m;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BadInput("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::vector<Graph> load_graphs(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Graph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      graphs.push_back(graph_from_json_line(line));
    } catch (const Error& e) {
      throw BadInput(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return graphs;
}

void save_graphs(const std::filesystem::path& path, const std::vector<Graph>& graphs) {
  auto out = open_out(path);
  for (const auto& g : graphs) out << graph_to_json_line(g) << '\n';
}

std::vector<LabeledPair> load_labeled_pairs(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<LabeledPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      LabeledPair p;
      p.g1_id = j.at("g1").get<std::string>();
      p.g2_id = j.at("g2").get<std::string>();
      p.label = j.at("label").get<double>();
      p.metric = metric_from_string(j.at("metric").get<std::string>());
      p.split = j.contains("split") ? split_from_string(j["split"].get<std::string>()) : Split::kTrain;
      validate_label(p);
      pairs.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw BadInput(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw BadInput(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

void save_labeled_pairs(const std::filesystem::path& path, const std::vector<LabeledPair>& pairs) {
  auto out = open_out(path);
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["g1"] = p.g1_id;
    j["g2"] = p.g2_id;
    j["label"] = p.label;
    j["metric"] = to_string(p.metric);
    j["split"] = to_string(p.split);
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& SplitAssignment::of(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kValid: return valid;
    case Split::kTest: return test;
  }
  return train;
}

SplitAssignment split_dataset(std::vector<std::string> ids, std::array<double, 3> fractions,
                              std::uint64_t seed) {
  for (double f : fractions) {
    if (!(f >= 0.0)) throw BadInput("split_dataset: fractions must be non-negative");
  }
  if (fractions[0] + fractions[1] > 1.0 + 1e-12) throw BadInput("split_dataset: fractions exceed 1");
  {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids) {
      if (!seen.insert(id).second) throw BadInput("split_dataset: duplicate id '" + id + "'");
    }
  }
  Rng rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto n = static_cast<double>(ids.size());
  const auto n_train = static_cast<std::size_t>(std::floor(fractions[0] * n + 1e-9));
  const auto n_valid = static_cast<std::size_t>(std::floor(fractions[1] * n + 1e-9));
  SplitAssignment out;
  out.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.valid.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                   ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  out.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), ids.end());
  return out;
}

// ---------------------------------------------------------------------------

DatasetManifest load_manifest(const std::filesystem::path& path) {
  auto in = open_in(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw BadInput(path.string() + ": " + e.what());
  }
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  static const std::set<std::string> known = {"metric", "graphs", "splits", "pairing", "label_cache", "pairs"};
  try {
    for (const auto& [key, _] : j.items()) {
      if (known.count(key) == 0) throw BadInput("manifest: unknown field '" + key + "'");
    }
    DatasetManifest m;
    m.metric = metric_from_string(j.at("metric").get<std::string>());
    m.graph_path = resolve(j.at("graphs").get<std::string>());
    const auto& s = j.at("splits");
    m.splits.train = s.at("train").get<std::vector<std::string>>();
    m.splits.valid = s.at("valid").get<std::vector<std::string>>();
    m.splits.test = s.at("test").get<std::vector<std::string>>();
    const auto& p = j.at("pairing");
    const auto policy = p.at("policy").get<std::string>();
    if (policy == "all_pairs") {
      m.pairing.kind = PairingPolicy::Kind::kAllPairs;
    } else if (policy == "sampled") {
      m.pairing.kind = PairingPolicy::Kind::kSampled;
      m.pairing.train_count = p.at("train").get<std::size_t>();
      m.pairing.valid_count = p.at("valid").get<std::size_t>();
      m.pairing.test_count = p.at("test").get<std::size_t>();
    } else {
      throw BadInput("manifest: unknown pairing policy '" + policy + "'");
    }
    m.pairing.seed = p.value("seed", std::uint64_t{0});
    m.label_cache_path = resolve(j.at("label_cache").get<std::string>());
    if (j.contains("pairs")) m.pairs_path = resolve(j["pairs"].get<std::string>());
    return m;
  } catch (const json::exception& e) {
    throw BadInput(path.string() + ": " + e.what());
  }
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  auto relative = [&](const std::filesystem::path& p) {
    if (p.is_relative()) return p.lexically_proximate(base).generic_string();
    return p.generic_string();
  };
  nlohmann::ordered_json j;
  j["metric"] = to_string(m.metric);
  j["graphs"] = relative(m.graph_path);
  j["splits"] = {{"train", m.splits.train}, {"valid", m.splits.valid}, {"test", m.splits.test}};
  nlohmann::ordered_json pairing;
  if (m.pairing.kind == PairingPolicy::Kind::kAllPairs) {
    pairing["policy"] = "all_pairs";
  } else {
    pairing["policy"] = "sampled";
    pairing["train"] = m.pairing.train_count;
    pairing["valid"] = m.pairing.valid_count;
    pairing["test"] = m.pairing.test_count;
  }
  pairing["seed"] = m.pairing.seed;
  j["pairing"] = std::move(pairing);
  j["label_cache"] = relative(m.label_cache_path);
  if (m.pairs_path) j["pairs"] = relative(*m.pairs_path);
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

namespace {

std::vector<PairSpec> pairs_within(const std::vector<std::string>& ids, Split split, bool all,
                                   std::size_t count, Rng& rng) {
  std::vector<PairSpec> out;
  const std::size_t n = ids.size();
  const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
  if (all || count >= total) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) out.push_back({ids[i], ids[j], split});
    }
    return out;
  }
  if (total <= 4'000'000) {
    std::vector<std::pair<std::size_t, std::size_t>> all_pairs;
    all_pairs.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) all_pairs.emplace_back(i, j);
    }
    std::shuffle(all_pairs.begin(), all_pairs.end(), rng);
    all_pairs.resize(count);
    for (auto [i, j] : all_pairs) out.push_back({ids[i], ids[j], split});
    return out;
  }
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out.size() < count) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (chosen.insert({i, j}).second) out.push_back({ids[i], ids[j], split});
  }
  return out;
}

}  // namespace

std::vector<PairSpec> make_pairs(const DatasetManifest& manifest) {
  const bool all = manifest.pairing.kind == PairingPolicy::Kind::kAllPairs;
  Rng rng(manifest.pairing.seed);
  auto out = pairs_within(manifest.splits.train, Split::kTrain, all, manifest.pairing.train_count, rng);
  auto valid = pairs_within(manifest.splits.valid, Split::kValid, all, manifest.pairing.valid_count, rng);
  out.insert(out.end(), valid.begin(), valid.end());

  const auto& test = manifest.splits.test;
  if (test.size() >= 2) {
    const std::size_t per_query = test.size() - 1;
    std::size_t queries = test.size();
    if (!all) queries = std::clamp<std::size_t>(manifest.pairing.test_count / per_query, 1, test.size());
    for (std::size_t q = 0; q < queries; ++q) {
      for (std::size_t c = 0; c < test.size(); ++c) {
        if (c != q) out.push_back({test[q], test[c], Split::kTest});
      }
    }
  }
  return out;
}

LoadedDataset load_dataset(const DatasetManifest& manifest) {
  LoadedDataset data;
  data.metric = manifest.metric;
  data.graphs = GraphSet(load_graphs(manifest.graph_path));

  std::unordered_set<std::string> assigned;
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
    for (const auto& id : manifest.splits.of(s)) {
      if (!data.graphs.contains(id)) throw BadInput("manifest split names unknown graph '" + id + "'");
      if (!assigned.insert(id).second) throw BadInput("graph '" + id + "' appears in more than one split");
    }
  }
  if (assigned.size() != data.graphs.size()) {
    throw BadInput("manifest splits cover " + std::to_string(assigned.size()) + " of " +
                   std::to_string(data.graphs.size()) + " graphs");
  }

  std::vector<LabeledPair> pairs;
  if (manifest.pairs_path) {
    pairs = load_labeled_pairs(*manifest.pairs_path);
    for (const auto& p : pairs) {
      if (p.metric != manifest.metric) {
        throw BadInput("pair (" + p.g1_id + "," + p.g2_id + ") has metric " + std::string(to_string(p.metric)) +
                       " but the manifest says " + std::string(to_string(manifest.metric)));
      }
      data.graphs.at(p.g1_id);
      data.graphs.at(p.g2_id);
    }
  } else {
    if (manifest.metric == Metric::kClass) {
      throw BadInput("classification datasets need a pre-labelled pairs file");
    }
    LabelCache cache(manifest.label_cache_path);
    std::size_t missing = 0;
    for (const auto& spec : make_pairs(manifest)) {
      auto hit = cache.lookup(spec.g1_id, spec.g2_id, manifest.metric);
      if (!hit) {
        ++missing;
        continue;
      }
      const Graph& a = data.graphs.at(spec.g1_id);
      const Graph& b = data.graphs.at(spec.g2_id);
      const double y = manifest.metric == Metric::kMcs ? nmcs(a, b, hit->value)
                                                       : nged(a, b, static_cast<double>(hit->value));
      pairs.push_back({spec.g1_id, spec.g2_id, y, manifest.metric, spec.split});
    }
    if (missing > 0) {
      throw BadInput(std::to_string(missing) + " pairs have no cached label; run the labeller first");
    }
  }
  for (auto& p : pairs) {
    switch (p.split) {
      case Split::kTrain: data.train.push_back(std::move(p)); break;
      case Split::kValid: data.valid.push_back(std::move(p)); break;
      case Split::kTest: data.test.push_back(std::move(p)); break;
    }
  }
  return data;
}

}  // namespace infmcs
