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

#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "infmcs/dataset.hpp"

namespace infmcs {

using nlohmann::json;

LabelCache::LabelCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // a missing cache is an empty cache
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      CacheEntry e;
      e.g1_id = j.at("g1").get<std::string>();
      e.g2_id = j.at("g2").get<std::string>();
      e.metric = metric_from_string(j.at("metric").get<std::string>());
      e.value = j.at("value").get<std::size_t>();
      e.provenance = provenance_from_string(j.at("provenance").get<std::string>());
      entries_[key(e.g1_id, e.g2_id, e.metric)] = std::move(e);
    } catch (const json::exception& ex) {
      throw BadInput(path_.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
}

std::string LabelCache::key(const std::string& a, const std::string& b, Metric metric) {
  const auto& lo = a < b ? a : b;
  const auto& hi = a < b ? b : a;
  return std::string(to_string(metric)) + '\x1f' + lo + '\x1f' + hi;
}

std::optional<CacheEntry> LabelCache::lookup(const std::string& a, const std::string& b, Metric metric) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key(a, b, metric));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void LabelCache::insert(CacheEntry entry) {
  if (entry.g2_id < entry.g1_id) std::swap(entry.g1_id, entry.g2_id);
  std::lock_guard lock(mutex_);
  if (!path_.empty()) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw BadInput("cannot append to label cache '" + path_.string() + "'");
    nlohmann::ordered_json j;
    j["g1"] = entry.g1_id;
    j["g2"] = entry.g2_id;
    j["metric"] = to_string(entry.metric);
    j["value"] = entry.value;
    j["provenance"] = to_string(entry.provenance);
    out << j.dump() << '\n';
  }
  entries_[key(entry.g1_id, entry.g2_id, entry.metric)] = std::move(entry);
}

std::size_t LabelCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<LabeledPair> label_pairs(const std::vector<PairSpec>& pairs, const GraphSet& graphs,
                                     Metric metric, const LabelOptions& options, LabelCache& cache) {
  if (metric == Metric::kClass) throw BadInput("class labels cannot be computed by an oracle");
  std::vector<LabeledPair> out(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      try {
        const auto& spec = pairs[i];
        const Graph& a = graphs.at(spec.g1_id);
        const Graph& b = graphs.at(spec.g2_id);
        std::size_t value = 0;
        if (auto hit = cache.lookup(spec.g1_id, spec.g2_id, metric)) {
          value = hit->value;
        } else {
          OracleResult r = metric == Metric::kMcs
                               ? mcs_exact(a, b, {options.mcs_budget_seconds, options.label_aware})
                               : label_ged(a, b, options.ged);
          value = r.value;
          cache.insert({spec.g1_id, spec.g2_id, metric, r.value, r.provenance});
        }
        const double y = metric == Metric::kMcs ? nmcs(a, b, value) : nged(a, b, static_cast<double>(value));
        out[i] = {spec.g1_id, spec.g2_id, y, metric, spec.split};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(pairs.size());
        return;
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace infmcs
