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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infmcs/graph.hpp"
#include "infmcs/oracles.hpp"

namespace infmcs {

using Rng = std::mt19937_64;

enum class Metric { kMcs, kGed, kClass };
std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

enum class Split { kTrain, kValid, kTest };
std::string_view to_string(Split s);
Split split_from_string(std::string_view s);

struct LabeledPair {
  std::string g1_id;
  std::string g2_id;
  double label = 0.0;
  Metric metric = Metric::kMcs;
  Split split = Split::kTrain;
};

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> valid;
  std::vector<std::string> test;

  const std::vector<std::string>& of(Split s) const;
};

/// Throws if `label` is outside the metric's range.
void validate_label(const LabeledPair& pair);

// ---------------------------------------------------------------------------
// Graph collections

/// Graphs plus an id -> position index.
class GraphSet {
 public:
  GraphSet() = default;
  explicit GraphSet(std::vector<Graph> graphs);

  void add(Graph g);
  const Graph& at(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  const std::vector<Graph>& graphs() const noexcept { return graphs_; }
  std::size_t size() const noexcept { return graphs_.size(); }
  std::size_t max_node_count() const;
  LabelId max_label() const;

 private:
  std::vector<Graph> graphs_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// JSON-lines graph files. Malformed records are reported with their line
/// number.
std::vector<Graph> load_graphs(const std::filesystem::path& path);
void save_graphs(const std::filesystem::path& path, const std::vector<Graph>& graphs);

/// JSON-lines {"g1","g2","label","metric","split"} records.
std::vector<LabeledPair> load_labeled_pairs(const std::filesystem::path& path);
void save_labeled_pairs(const std::filesystem::path& path, const std::vector<LabeledPair>& pairs);

// ---------------------------------------------------------------------------
// Generators

/// Preferential attachment. Without a core the seed is the complete graph on
/// attach_m + 1 nodes; with a core, new nodes attach to the core-seeded
/// graph. New nodes get label 0.
Graph ba_graph(std::size_t n_nodes, std::size_t attach_m, const Graph* core, Rng& rng,
               std::string id);

/// c / (c + (a1 + a2) / 2)
double core_similarity(std::size_t core, std::size_t added1, std::size_t added2);

struct BaMcsParams {
  std::size_t core_min = 50;
  std::size_t core_max = 70;
  std::size_t add_min = 30;
  std::size_t add_max = 50;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::size_t attach_m = 1;
};

struct BaMcsSample {
  std::size_t core_size = 0;
  std::size_t added1 = 0;
  std::size_t added2 = 0;
};

struct GeneratedData {
  std::vector<Graph> graphs;
  std::vector<LabeledPair> pairs;
};

struct BaMcsData : GeneratedData {
  std::vector<BaMcsSample> samples;  // parallel to pairs
};

/// Core-and-grow pairs: both graphs contain the core as the induced
/// subgraph on nodes 0..c-1, labelled with core_similarity (a lower bound on
/// the true nMCS). Pair splits are assigned 80/10/10 over samples.
BaMcsData generate_ba_mcs(const BaMcsParams& params);

enum class EditKind { kDeleteLeaf, kAddLeaf, kAddEdge };

/// Applies one random edit (kinds equally likely; delete-leaf falls back to
/// add-edge when there is no leaf, add-edge to add-leaf on complete graphs).
/// Returns the uniform edit cost of what was applied.
std::size_t apply_random_edit(Graph& g, Rng& rng, EditKind* applied = nullptr);

struct BaGedParams {
  std::size_t base_nodes = 100;
  std::size_t count = 100;       // graphs per collection
  std::uint64_t seed = 0;
  std::size_t attach_m = 1;
  std::size_t max_pairs = 0;     // 0: all unordered pairs, else a seeded sample
  std::size_t beam_width = 100;
};

struct BaGedSample {
  std::size_t collection = 0;    // which base graph it derives from
  std::size_t steps = 0;         // number of random edits applied
  std::size_t edit_cost = 0;     // uniform cost of those edits
};

struct BaGedData : GeneratedData {
  std::vector<BaGedSample> samples;  // parallel to graphs
  std::size_t base_distance = 0;     // upper bound on GED(base1, base2)
  SplitAssignment split;             // per-graph 80/10/10 assignment
};

/// Two base graphs, `count` edited copies of each; every pair is labelled
/// with nGED of min(path bound, beam, hungarian) where the path bound is
/// cost1 + cost2 (+ base distance across collections).
BaGedData generate_ba_ged(const BaGedParams& params);

/// Node-labelled small graphs for desk-scale MCS experiments.
struct LabeledPoolParams {
  std::size_t count = 510;
  std::size_t min_nodes = 2;
  std::size_t max_nodes = 15;
  std::size_t num_labels = 8;
  std::size_t attach_m = 1;
  std::uint64_t seed = 0;
  std::string id_prefix = "g";
};

/// Preferential-attachment graphs whose node labels follow a geometric
/// distribution (label k with weight 2^-k).
std::vector<Graph> generate_labeled_pool(const LabeledPoolParams& params);

// ---------------------------------------------------------------------------
// Splits, manifest, pairing

/// Seeded shuffle, then the first floor(f0*n) ids train, the next floor(f1*n)
/// valid and the rest test.
SplitAssignment split_dataset(std::vector<std::string> ids, std::array<double, 3> fractions,
                              std::uint64_t seed);

struct PairingPolicy {
  enum class Kind { kAllPairs, kSampled };
  Kind kind = Kind::kSampled;
  std::uint64_t seed = 0;
  std::size_t train_count = 0;
  std::size_t valid_count = 0;
  std::size_t test_count = 0;  // rounded down to whole queries
};

struct DatasetManifest {
  Metric metric = Metric::kMcs;
  std::filesystem::path graph_path;
  SplitAssignment splits;
  PairingPolicy pairing;
  std::filesystem::path label_cache_path;
  std::optional<std::filesystem::path> pairs_path;  // pre-labelled pairs
};

/// Relative paths inside the manifest are resolved against its directory.
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct PairSpec {
  std::string g1_id;
  std::string g2_id;
  Split split = Split::kTrain;
};

/// Train and validation pairs are drawn within their split. Test pairs are
/// query-major: each query graph against every other test graph.
std::vector<PairSpec> make_pairs(const DatasetManifest& manifest);

// ---------------------------------------------------------------------------
// Labelling

struct CacheEntry {
  std::string g1_id;
  std::string g2_id;
  Metric metric = Metric::kMcs;
  std::size_t value = 0;
  Provenance provenance = Provenance::kExact;
};

/// Oracle results keyed by the lexicographically ordered id pair. Appends to
/// its file (when it has one) on every insert. Thread-safe.
class LabelCache {
 public:
  LabelCache() = default;
  explicit LabelCache(std::filesystem::path path);

  std::optional<CacheEntry> lookup(const std::string& a, const std::string& b, Metric metric) const;
  void insert(CacheEntry entry);
  std::size_t size() const;

 private:
  static std::string key(const std::string& a, const std::string& b, Metric metric);

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
};

struct LabelOptions {
  double mcs_budget_seconds = 10.0;
  bool label_aware = true;
  GedLabelOptions ged;
  std::size_t jobs = 1;
};

/// Computes (or fetches from the cache) the similarity label of every pair.
/// Output order follows the input.
std::vector<LabeledPair> label_pairs(const std::vector<PairSpec>& pairs, const GraphSet& graphs,
                                     Metric metric, const LabelOptions& options, LabelCache& cache);

/// Everything a trainer or evaluator needs, with labels resolved from the
/// pairs file or the label cache.
struct LoadedDataset {
  Metric metric = Metric::kMcs;
  GraphSet graphs;
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> valid;
  std::vector<LabeledPair> test;
};

/// Throws if a pair has no label yet (run the labeller first).
LoadedDataset load_dataset(const DatasetManifest& manifest);

}  // namespace infmcs
