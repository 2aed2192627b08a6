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
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "infmcs/error.hpp"
#include "infmcs/evaluation.hpp"
#include "infmcs/oracles.hpp"

namespace infmcs {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw BadInput("cannot write " + path.string());
  out.precision(17);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RankingSummary rank_queries(const ModelParams& params, const PreparedSet& graphs,
                            const std::vector<LabeledPair>& pairs, std::size_t k) {
  if (pairs.empty()) throw BadInput("rank_queries: no pairs");
  std::vector<std::string> query_order;
  std::unordered_map<std::string, std::vector<LabeledPair>> groups;
  for (const auto& p : pairs) {
    auto [it, fresh] = groups.try_emplace(p.g1_id);
    if (fresh) query_order.push_back(p.g1_id);
    it->second.push_back(p);
  }

  RankingSummary summary;
  summary.k = k;
  std::vector<double> all_pred, all_truth;
  for (const auto& q : query_order) {
    auto group = groups.at(q);
    std::stable_sort(group.begin(), group.end(),
                     [](const LabeledPair& a, const LabeledPair& b) { return a.g2_id < b.g2_id; });
    const auto pred = predict(params, graphs, group);
    std::vector<double> truth;
    for (const auto& p : group) truth.push_back(p.label);

    RankingResult r;
    r.query_id = q;
    r.rho = spearman_rho(pred, truth);
    r.precision = precision_at_k(pred, truth, k);
    std::vector<std::size_t> order(group.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pred[a] > pred[b]; });
    for (std::size_t i : order) {
      r.candidates.push_back(group[i].g2_id);
      r.predicted.push_back(pred[i]);
      r.truth.push_back(truth[i]);
    }
    summary.mean_rho += r.rho;
    summary.mean_precision += r.precision;
    all_pred.insert(all_pred.end(), pred.begin(), pred.end());
    all_truth.insert(all_truth.end(), truth.begin(), truth.end());
    summary.queries.push_back(std::move(r));
  }
  const double nq = static_cast<double>(summary.queries.size());
  summary.mean_rho /= nq;
  summary.mean_precision /= nq;
  summary.global_rho = spearman_rho(all_pred, all_truth);
  summary.mse = mse_metric(all_pred, all_truth);
  return summary;
}

std::map<std::string, double> evaluate_pairs(const ModelParams& params, const PreparedSet& graphs,
                                             const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw BadInput("evaluate_pairs: no pairs");
  std::map<std::string, double> out;
  out["pairs"] = static_cast<double>(pairs.size());
  if (pairs.front().metric == Metric::kClass) {
    const auto pred = predict(params, graphs, pairs);
    std::vector<int> labels;
    double correct = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      labels.push_back(pairs[i].label >= 0.5 ? 1 : 0);
      correct += ((pred[i] >= 0.5) == (labels.back() == 1)) ? 1.0 : 0.0;
    }
    out["auc"] = auc(pred, labels);
    out["accuracy"] = correct / static_cast<double>(pairs.size());
    out["bce"] = evaluate_loss(params, graphs, pairs, Task::kClassification);
    return out;
  }
  const auto r10 = rank_queries(params, graphs, pairs, 10);
  const auto r20 = rank_queries(params, graphs, pairs, 20);
  out["mse"] = r10.mse;
  out["rho"] = r10.mean_rho;
  out["rho_global"] = r10.global_rho;
  out["p@10"] = r10.mean_precision;
  out["p@20"] = r20.mean_precision;
  out["queries"] = static_cast<double>(r10.queries.size());
  return out;
}

void write_summary_json(const std::filesystem::path& path, const std::map<std::string, double>& summary) {
  auto out = open_output(path);
  out << nlohmann::json(summary).dump(2) << '\n';
}

void write_predictions_csv(const std::filesystem::path& path, const std::vector<LabeledPair>& pairs,
                           std::span<const double> predictions) {
  if (pairs.size() != predictions.size()) throw BadInput("write_predictions_csv: length mismatch");
  auto out = open_output(path);
  out << "g1,g2,label,prediction\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out << pairs[i].g1_id << ',' << pairs[i].g2_id << ',' << pairs[i].label << ',' << predictions[i] << '\n';
  }
}

void write_ranking_csv(const std::filesystem::path& path, const RankingSummary& summary) {
  auto out = open_output(path);
  out << "query,position,candidate,predicted,truth\n";
  for (const auto& q : summary.queries) {
    for (std::size_t i = 0; i < q.candidates.size(); ++i) {
      out << q.query_id << ',' << i + 1 << ',' << q.candidates[i] << ',' << q.predicted[i] << ',' << q.truth[i]
          << '\n';
    }
  }
}

std::vector<BenchRow> bench_runtime(const ModelParams& params, const GraphSet& graphs,
                                    const std::vector<LabeledPair>& pairs, const BenchOptions& options) {
  if (pairs.empty()) throw BadInput("bench_runtime: no pairs");
  std::vector<BenchRow> rows = {{"model"}, {"mcs_exact"}, {"ged_astar"}, {"ged_beam"}, {"ged_hungarian"}};
  for (auto& r : rows) r.pairs = pairs.size();

  // Graph preparation (centrality, normalisation) counts towards model time.
  for (const auto& p : pairs) {
    const Graph& a = graphs.at(p.g1_id);
    const Graph& b = graphs.at(p.g2_id);
    auto start = std::chrono::steady_clock::now();
    {
      ad::NoGradGuard no_grad;
      forward(a, b, params);
    }
    rows[0].mean_seconds += seconds_since(start);

    start = std::chrono::steady_clock::now();
    try {
      mcs_exact(a, b, {options.budget_seconds, options.label_aware});
    } catch (const BudgetExceeded&) {
      ++rows[1].timeouts;
    }
    rows[1].mean_seconds += seconds_since(start);

    start = std::chrono::steady_clock::now();
    try {
      ged_astar(a, b, options.budget_seconds);
    } catch (const BudgetExceeded&) {
      ++rows[2].timeouts;
    }
    rows[2].mean_seconds += seconds_since(start);

    start = std::chrono::steady_clock::now();
    ged_beam(a, b, options.beam_width);
    rows[3].mean_seconds += seconds_since(start);

    start = std::chrono::steady_clock::now();
    ged_hungarian(a, b);
    rows[4].mean_seconds += seconds_since(start);
  }
  for (auto& r : rows) r.mean_seconds /= static_cast<double>(pairs.size());
  return rows;
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
  auto out = open_output(path);
  out << "method,pairs,timeouts,mean_seconds\n";
  for (const auto& r : rows) out << r.method << ',' << r.pairs << ',' << r.timeouts << ',' << r.mean_seconds << '\n';
}

void export_pe(const ModelParams& params, const std::filesystem::path& path) {
  auto out = open_output(path);
  const std::size_t d = params.positional.cols();
  out << "index";
  for (std::size_t j = 0; j < d; ++j) out << ",v" << j;
  out << '\n';
  for (std::size_t i = 0; i < params.positional.rows(); ++i) {
    out << i;
    for (std::size_t j = 0; j < d; ++j) out << ',' << params.positional.at(i, j);
    out << '\n';
  }
}

}  // namespace infmcs
