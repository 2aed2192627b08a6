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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "infmcs/dataset.hpp"
#include "infmcs/model.hpp"
#include "infmcs/trainer.hpp"

namespace infmcs {

// ---------------------------------------------------------------------------
// Metrics. Inputs must have equal, non-zero length.

double mse_metric(std::span<const double> pred, std::span<const double> truth);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. 0 when either side has no rank
/// variance.
double spearman_rho(std::span<const double> pred, std::span<const double> truth);

/// Overlap of the top-k by `pred` and the top-k by `truth`, divided by k.
/// Ties are broken by candidate position, so callers should pass candidates
/// in id order. k is clamped to the list length.
double precision_at_k(std::span<const double> pred, std::span<const double> truth, std::size_t k);

/// Mann-Whitney form: P(pos > neg) + 0.5 P(pos == neg). Needs both classes.
double auc(std::span<const double> scores, std::span<const int> labels);

// ---------------------------------------------------------------------------
// Ranking protocol

struct RankingResult {
  std::string query_id;
  std::vector<std::string> candidates;  // sorted by predicted score, best first
  std::vector<double> predicted;        // aligned with candidates
  std::vector<double> truth;            // aligned with candidates
  double rho = 0.0;
  double precision = 0.0;               // p@k
};

struct RankingSummary {
  std::size_t k = 10;
  std::vector<RankingResult> queries;
  double mean_rho = 0.0;     // per-query rho, averaged
  double global_rho = 0.0;   // rho over all pairs at once
  double mean_precision = 0.0;
  double mse = 0.0;
};

/// Groups `pairs` by their first graph (the query) and ranks each query's
/// candidates by model similarity.
RankingSummary rank_queries(const ModelParams& params, const PreparedSet& graphs,
                            const std::vector<LabeledPair>& pairs, std::size_t k = 10);

/// {metric name: value} over a labelled pair set. Regression sets report mse,
/// rho, rho_global, p@10 and p@20; classification sets report auc, accuracy
/// and bce.
std::map<std::string, double> evaluate_pairs(const ModelParams& params, const PreparedSet& graphs,
                                             const std::vector<LabeledPair>& pairs);

void write_summary_json(const std::filesystem::path& path, const std::map<std::string, double>& summary);
void write_predictions_csv(const std::filesystem::path& path, const std::vector<LabeledPair>& pairs,
                           std::span<const double> predictions);
void write_ranking_csv(const std::filesystem::path& path, const RankingSummary& summary);

// ---------------------------------------------------------------------------
// Runtime benchmark

struct BenchRow {
  std::string method;
  std::size_t pairs = 0;
  std::size_t timeouts = 0;   // runs that hit the budget (time still counted)
  double mean_seconds = 0.0;
};

struct BenchOptions {
  double budget_seconds = 10.0;
  std::size_t beam_width = 100;
  bool label_aware = true;
};

/// Mean wall time per pair for the model and each oracle.
std::vector<BenchRow> bench_runtime(const ModelParams& params, const GraphSet& graphs,
                                    const std::vector<LabeledPair>& pairs, const BenchOptions& options);

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);

/// One row per dictionary entry: index, then the d values.
void export_pe(const ModelParams& params, const std::filesystem::path& path);

}  // namespace infmcs
