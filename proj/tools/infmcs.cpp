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

// Command-line front end. Every failure ends with a single JSON line on
// stderr, {"error": kind, "message": text}, and a kind-specific exit code.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "infmcs/config.hpp"
#include "infmcs/dataset.hpp"
#include "infmcs/evaluation.hpp"
#include "infmcs/gradient_suite.hpp"
#include "infmcs/interpret.hpp"
#include "infmcs/model.hpp"
#include "infmcs/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace infmcs {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumeric = 4;

int report(std::string_view kind, const std::string& message, int code) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenOptions {
  std::string metric = "mcs";
  std::string preset = "desk";
  std::uint64_t seed = 0;
  fs::path out;
  std::optional<std::size_t> count, attach_m, core_min, core_max, add_min, add_max, base_nodes, max_pairs,
      beam_width, min_nodes, max_nodes, num_labels, train_pairs, valid_pairs, test_pairs;
};

template <typename T>
void override_with(T& field, const std::optional<T>& value) {
  if (value) field = *value;
}

void write_labelled_dataset(const GenOptions& o, Metric metric, const std::vector<Graph>& graphs,
                            const std::vector<LabeledPair>& pairs, SplitAssignment splits) {
  fs::create_directories(o.out);
  DatasetManifest m;
  m.metric = metric;
  m.graph_path = o.out / "graphs.jsonl";
  m.splits = std::move(splits);
  m.pairing.seed = o.seed;
  m.label_cache_path = o.out / "labels.jsonl";
  m.pairs_path = o.out / "pairs.jsonl";
  save_graphs(m.graph_path, graphs);
  save_labeled_pairs(*m.pairs_path, pairs);
  save_manifest(o.out / "manifest.json", m);
  std::cout << "wrote " << graphs.size() << " graphs and " << pairs.size() << " labelled pairs to "
            << o.out.string() << '\n';
}

int run_gen_data(const GenOptions& o) {
  const Metric metric = metric_from_string(o.metric);
  const std::set<std::string> presets = {"ba100", "ba200", "ba300", "desk"};
  if (!presets.count(o.preset)) throw BadInput("unknown preset '" + o.preset + "'");
  if (metric == Metric::kClass) throw BadInput("gen-data supports --metric mcs or ged");
  const std::size_t scale = o.preset == "desk" ? 0 : std::stoul(o.preset.substr(2));

  if (metric == Metric::kMcs && o.preset == "desk") {
    LabeledPoolParams p;
    p.seed = o.seed;
    override_with(p.count, o.count);
    override_with(p.attach_m, o.attach_m);
    override_with(p.min_nodes, o.min_nodes);
    override_with(p.max_nodes, o.max_nodes);
    override_with(p.num_labels, o.num_labels);
    const auto graphs = generate_labeled_pool(p);
    std::vector<std::string> ids;
    for (const auto& g : graphs) ids.push_back(g.id());

    DatasetManifest m;
    m.metric = Metric::kMcs;
    m.graph_path = o.out / "graphs.jsonl";
    m.splits = split_dataset(ids, {0.8, 0.1, 0.1}, o.seed);
    m.pairing.kind = PairingPolicy::Kind::kSampled;
    m.pairing.seed = o.seed;
    m.pairing.train_count = o.train_pairs.value_or(2000);
    m.pairing.valid_count = o.valid_pairs.value_or(250);
    m.pairing.test_count = o.test_pairs.value_or(250);
    m.label_cache_path = o.out / "labels.jsonl";
    fs::create_directories(o.out);
    save_graphs(m.graph_path, graphs);
    save_manifest(o.out / "manifest.json", m);
    std::cout << "wrote " << graphs.size() << " graphs to " << o.out.string()
              << "; run `infmcs label` to compute pair labels\n";
    return kExitOk;
  }

  if (metric == Metric::kMcs) {
    BaMcsParams p;
    p.seed = o.seed;
    p.core_min = scale / 2;
    p.core_max = scale / 2 + 20;
    p.add_min = scale == 100 ? 30 : scale - 20;
    p.add_max = p.add_min + 20;
    p.count = 40000;
    override_with(p.count, o.count);
    override_with(p.attach_m, o.attach_m);
    override_with(p.core_min, o.core_min);
    override_with(p.core_max, o.core_max);
    override_with(p.add_min, o.add_min);
    override_with(p.add_max, o.add_max);
    auto data = generate_ba_mcs(p);
    SplitAssignment splits;
    for (const auto& pair : data.pairs) {
      auto& bucket = pair.split == Split::kTrain ? splits.train : pair.split == Split::kValid ? splits.valid : splits.test;
      bucket.push_back(pair.g1_id);
      bucket.push_back(pair.g2_id);
    }
    write_labelled_dataset(o, metric, data.graphs, data.pairs, std::move(splits));
    return kExitOk;
  }

  BaGedParams p;
  p.seed = o.seed;
  if (o.preset == "desk") {
    p.base_nodes = 10;
    p.count = 30;
  } else {
    p.base_nodes = scale;
    p.count = 160;
    p.max_pairs = 40000;
  }
  override_with(p.count, o.count);
  override_with(p.attach_m, o.attach_m);
  override_with(p.base_nodes, o.base_nodes);
  override_with(p.max_pairs, o.max_pairs);
  override_with(p.beam_width, o.beam_width);
  auto data = generate_ba_ged(p);
  write_labelled_dataset(o, metric, data.graphs, data.pairs, data.split);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// label

struct LabelCliOptions {
  fs::path manifest;
  std::optional<std::string> metric;
  std::optional<double> budget;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> beam_width;
  bool ignore_labels = false;
};

int run_label(const LabelCliOptions& o, const RunConfig& config) {
  const DatasetManifest m = load_manifest(o.manifest);
  if (o.metric && metric_from_string(*o.metric) != m.metric) {
    throw BadInput("--metric " + *o.metric + " disagrees with the manifest metric " +
                   std::string(to_string(m.metric)));
  }
  if (m.pairs_path) {
    std::cout << "manifest already names labelled pairs (" << m.pairs_path->string() << "); nothing to do\n";
    return kExitOk;
  }
  LabelOptions options = config.oracle.label_options();
  if (o.budget) options.mcs_budget_seconds = options.ged.astar_budget_seconds = *o.budget;
  if (o.jobs) options.jobs = *o.jobs;
  if (o.beam_width) options.ged.beam_width = *o.beam_width;
  if (o.ignore_labels) options.label_aware = false;

  const GraphSet graphs(load_graphs(m.graph_path));
  LabelCache cache(m.label_cache_path);
  const std::size_t before = cache.size();
  const auto pairs = make_pairs(m);
  label_pairs(pairs, graphs, m.metric, options, cache);
  ordered_json j;
  j["pairs"] = pairs.size();
  j["computed"] = cache.size() - before;
  j["cache"] = m.label_cache_path.string();
  std::cout << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train / init

struct TrainCliOptions {
  fs::path manifest;
  fs::path out;
  std::optional<std::size_t> epochs, batch_size, hidden_dim, layers, heads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> task;
  std::optional<double> learning_rate, grad_clip;
};

void apply_train_overrides(const TrainCliOptions& o, RunConfig& c, Metric metric) {
  override_with(c.train.epochs, o.epochs);
  override_with(c.train.batch_size, o.batch_size);
  override_with(c.model.hidden_dim, o.hidden_dim);
  override_with(c.model.transformer_layers, o.layers);
  override_with(c.model.heads, o.heads);
  override_with(c.train.learning_rate, o.learning_rate);
  override_with(c.train.grad_clip, o.grad_clip);
  if (o.seed) c.train.seed = c.model.seed = *o.seed;
  if (o.task) {
    c.train.task = task_from_string(*o.task);
  } else if (metric == Metric::kClass) {
    c.train.task = Task::kClassification;
  }
  c.model.validate();
}

fs::path manifest_path(const fs::path& flag, const RunConfig& c) {
  const fs::path p = flag.empty() ? c.manifest : flag;
  if (p.empty()) throw BadInput("no manifest given (use --manifest or paths.manifest in the config)");
  return p;
}

int run_train(const TrainCliOptions& o, RunConfig c) {
  const DatasetManifest m = load_manifest(manifest_path(o.manifest, c));
  apply_train_overrides(o, c, m.metric);
  c.train.checkpoint_dir = !o.out.empty() ? o.out : !c.out.empty() ? c.out : c.train.checkpoint_dir;
  const fs::path best = train(m, c.model, c.train);
  std::cout << best.string() << '\n';
  return kExitOk;
}

int run_init(const TrainCliOptions& o, RunConfig c) {
  const DatasetManifest m = load_manifest(manifest_path(o.manifest, c));
  apply_train_overrides(o, c, m.metric);
  if (o.out.empty()) throw BadInput("init needs --out");
  const GraphSet graphs(load_graphs(m.graph_path));
  save_checkpoint(o.out, ModelParams::initialize(resolve_model_config(c.model, graphs)));
  std::cout << o.out.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval / rank / bench / export-pe / infer-mcs

struct EvalCliOptions {
  fs::path checkpoint;
  fs::path manifest;
  fs::path out;
  std::string split = "test";
  std::size_t k = 10;
  std::optional<double> budget;
  std::size_t max_pairs = 100;
  std::string pair;
  fs::path graphs;
  fs::path dot;
};

const std::vector<LabeledPair>& split_of(const LoadedDataset& d, const std::string& name) {
  switch (split_from_string(name)) {
    case Split::kTrain: return d.train;
    case Split::kValid: return d.valid;
    case Split::kTest: break;
  }
  return d.test;
}

int run_eval(const EvalCliOptions& o, const RunConfig& c) {
  const ModelParams params = load_checkpoint(o.checkpoint);
  const LoadedDataset data = load_dataset(load_manifest(manifest_path(o.manifest, c)));
  const auto& pairs = split_of(data, o.split);
  const PreparedSet prepared = prepare_all(data.graphs);
  const auto summary = evaluate_pairs(params, prepared, pairs);
  if (!o.out.empty()) {
    write_summary_json(o.out / "summary.json", summary);
    write_predictions_csv(o.out / "predictions.csv", pairs, predict(params, prepared, pairs));
  }
  for (const auto& [name, v] : summary) {
    if (!std::isfinite(v)) throw NumericFailure("metric " + name + " is not finite");
  }
  std::cout << nlohmann::json(summary).dump() << '\n';
  return kExitOk;
}

int run_rank(const EvalCliOptions& o, const RunConfig& c) {
  const ModelParams params = load_checkpoint(o.checkpoint);
  const LoadedDataset data = load_dataset(load_manifest(manifest_path(o.manifest, c)));
  const auto summary = rank_queries(params, prepare_all(data.graphs), split_of(data, o.split), o.k);
  if (!o.out.empty()) write_ranking_csv(o.out, summary);
  ordered_json j;
  j["queries"] = summary.queries.size();
  j["k"] = summary.k;
  j["rho"] = summary.mean_rho;
  j["rho_global"] = summary.global_rho;
  j["p@k"] = summary.mean_precision;
  j["mse"] = summary.mse;
  std::cout << j.dump() << '\n';
  return kExitOk;
}

int run_bench(const EvalCliOptions& o, const RunConfig& c) {
  const ModelParams params = load_checkpoint(o.checkpoint);
  const LoadedDataset data = load_dataset(load_manifest(manifest_path(o.manifest, c)));
  auto pairs = split_of(data, o.split);
  if (pairs.size() > o.max_pairs) pairs.resize(o.max_pairs);
  BenchOptions options;
  options.budget_seconds = o.budget.value_or(c.oracle.mcs_budget_seconds);
  options.beam_width = c.oracle.beam_width;
  options.label_aware = c.oracle.label_aware;
  const auto rows = bench_runtime(params, data.graphs, pairs, options);
  if (!o.out.empty()) write_bench_csv(o.out, rows);
  std::cout << "method,pairs,timeouts,mean_seconds\n";
  for (const auto& r : rows) std::cout << r.method << ',' << r.pairs << ',' << r.timeouts << ',' << r.mean_seconds << '\n';
  return kExitOk;
}

int run_export_pe(const EvalCliOptions& o) {
  if (o.out.empty()) throw BadInput("export-pe needs --out");
  export_pe(load_checkpoint(o.checkpoint), o.out);
  std::cout << o.out.string() << '\n';
  return kExitOk;
}

int run_infer_mcs(const EvalCliOptions& o, const RunConfig& c) {
  const auto comma = o.pair.find(',');
  if (comma == std::string::npos) throw BadInput("--pair expects two graph ids separated by a comma");
  const std::string id_a = o.pair.substr(0, comma);
  const std::string id_b = o.pair.substr(comma + 1);
  fs::path graph_file = o.graphs;
  if (graph_file.empty()) graph_file = load_manifest(manifest_path(o.manifest, c)).graph_path;
  const GraphSet graphs(load_graphs(graph_file));
  const Graph& a = graphs.at(id_a);
  const Graph& b = graphs.at(id_b);

  const ModelParams params = load_checkpoint(o.checkpoint);
  const PredictedMcs p = infer_mcs(params, a, b);
  const Graph& g1 = p.a_is_first ? a : b;
  ordered_json j;
  j["g1"] = g1.id();
  j["g2"] = (p.a_is_first ? b : a).id();
  j["yhat"] = p.yhat;
  j["m"] = p.m;
  j["nodes"] = p.nodes;
  ordered_json edges = ordered_json::array();
  std::ostringstream dot;
  dot << "graph mcs {\n";
  for (NodeId v : p.nodes) dot << "  " << v << " [label=\"" << v << ":" << g1.label(v) << "\"];\n";
  for (const auto& e : p.subgraph.edges()) {
    const NodeId u = p.nodes[e.u], v = p.nodes[e.v];
    edges.push_back({u, v});
    dot << "  " << u << " -- " << v << ";\n";
  }
  dot << "}\n";
  j["edges"] = std::move(edges);
  const double budget = o.budget.value_or(c.oracle.mcs_budget_seconds);
  if (budget > 0.0) {
    try {
      j["quality"] = mcs_quality(p, a, b, {budget, c.oracle.label_aware});
    } catch (const BudgetExceeded&) {
      // quality is optional; omit it when the oracle cannot finish
    }
  }
  j["dot"] = dot.str();
  if (!o.dot.empty()) {
    std::ofstream out(o.dot);
    if (!out) throw BadInput("cannot write " + o.dot.string());
    out << dot.str();
  }
  std::cout << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// grad-check

int run_grad_check(std::size_t seeds) {
  bool ok = true;
  std::cout << "op,max_rel_error,tolerance,status\n";
  auto show = [&](const GradCheckReport& r, double tol) {
    const bool pass = r.max_error < tol;
    ok = ok && pass;
    std::cout << r.name << ',' << r.max_error << ',' << tol << ',' << (pass ? "ok" : "FAIL") << '\n';
  };
  for (const auto& r : check_op_gradients(seeds)) show(r, 1e-4);
  show(check_model_gradients(seeds), 1e-3);
  if (!ok) return report("numeric", "gradient check exceeded tolerance", kExitNumeric);
  return kExitOk;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Graph similarity via implicit maximum-common-subgraph inference"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "Run config JSON (default: $" + std::string(kConfigEnvVar) + ")");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  gen_cmd->add_option("--metric", gen.metric, "mcs or ged")->check(CLI::IsMember({"mcs", "ged"}));
  gen_cmd->add_option("--preset", gen.preset, "ba100, ba200, ba300 or desk")
      ->check(CLI::IsMember({"ba100", "ba200", "ba300", "desk"}));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--count", gen.count, "Samples (BA-MCS), graphs per collection (BA-GED) or pool size (desk)");
  gen_cmd->add_option("--attach-m", gen.attach_m, "Edges per new node in preferential attachment");
  gen_cmd->add_option("--core-min", gen.core_min);
  gen_cmd->add_option("--core-max", gen.core_max);
  gen_cmd->add_option("--add-min", gen.add_min);
  gen_cmd->add_option("--add-max", gen.add_max);
  gen_cmd->add_option("--base-nodes", gen.base_nodes);
  gen_cmd->add_option("--max-pairs", gen.max_pairs, "BA-GED pair sample size (0 = all)");
  gen_cmd->add_option("--beam-width", gen.beam_width);
  gen_cmd->add_option("--min-nodes", gen.min_nodes, "desk MCS pool");
  gen_cmd->add_option("--max-nodes", gen.max_nodes, "desk MCS pool");
  gen_cmd->add_option("--num-labels", gen.num_labels, "desk MCS pool");
  gen_cmd->add_option("--train-pairs", gen.train_pairs, "desk MCS pairing");
  gen_cmd->add_option("--valid-pairs", gen.valid_pairs, "desk MCS pairing");
  gen_cmd->add_option("--test-pairs", gen.test_pairs, "desk MCS pairing");

  LabelCliOptions label;
  auto* label_cmd = app.add_subcommand("label", "Compute oracle labels into the manifest's label cache");
  label_cmd->add_option("--manifest", label.manifest)->required();
  label_cmd->add_option("--metric", label.metric);
  label_cmd->add_option("--budget", label.budget, "Seconds per exact oracle call");
  label_cmd->add_option("--jobs", label.jobs);
  label_cmd->add_option("--beam-width", label.beam_width);
  label_cmd->add_flag("--ignore-node-labels", label.ignore_labels, "MCS ignores node labels");

  TrainCliOptions tr;
  auto add_train_flags = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", tr.manifest);
    cmd->add_option("--out", tr.out);
    cmd->add_option("--epochs", tr.epochs);
    cmd->add_option("--batch-size", tr.batch_size);
    cmd->add_option("--hidden-dim", tr.hidden_dim);
    cmd->add_option("--layers", tr.layers, "Transformer layers");
    cmd->add_option("--heads", tr.heads);
    cmd->add_option("--seed", tr.seed);
    cmd->add_option("--task", tr.task)->check(CLI::IsMember({"regression", "classification"}));
    cmd->add_option("--lr", tr.learning_rate);
    cmd->add_option("--grad-clip", tr.grad_clip);
  };
  auto* train_cmd = app.add_subcommand("train", "Train a model; prints the best checkpoint path");
  add_train_flags(train_cmd);
  auto* init_cmd = app.add_subcommand("init", "Write an untrained checkpoint sized for a dataset");
  add_train_flags(init_cmd);

  EvalCliOptions ev;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--checkpoint", ev.checkpoint)->required();
    cmd->add_option("--manifest", ev.manifest);
    cmd->add_option("--split", ev.split)->check(CLI::IsMember({"train", "valid", "test"}));
  };
  auto* eval_cmd = app.add_subcommand("eval", "Metrics of a checkpoint on a labelled split");
  add_common(eval_cmd);
  eval_cmd->add_option("--out", ev.out, "Directory for summary.json and predictions.csv");
  auto* rank_cmd = app.add_subcommand("rank", "Ranking protocol: rho and p@k per query");
  add_common(rank_cmd);
  rank_cmd->add_option("--k", ev.k)->check(CLI::PositiveNumber);
  rank_cmd->add_option("--out", ev.out, "Ranking CSV");
  auto* bench_cmd = app.add_subcommand("bench", "Model vs oracle time per pair");
  add_common(bench_cmd);
  bench_cmd->add_option("--budget", ev.budget, "Seconds per exact oracle call");
  bench_cmd->add_option("--pairs", ev.max_pairs, "Number of pairs to time");
  bench_cmd->add_option("--out", ev.out, "CSV table");
  auto* infer_cmd = app.add_subcommand("infer-mcs", "Extract the implicit MCS of one pair");
  infer_cmd->add_option("--checkpoint", ev.checkpoint)->required();
  infer_cmd->add_option("--pair", ev.pair, "id1,id2")->required();
  infer_cmd->add_option("--manifest", ev.manifest);
  infer_cmd->add_option("--graphs", ev.graphs, "Graph file (instead of --manifest)");
  infer_cmd->add_option("--budget", ev.budget, "Oracle seconds for the quality score (0 skips it)");
  infer_cmd->add_option("--dot", ev.dot, "Also write the subgraph as GraphViz");
  auto* pe_cmd = app.add_subcommand("export-pe", "Positional dictionary as CSV");
  pe_cmd->add_option("--checkpoint", ev.checkpoint)->required();
  pe_cmd->add_option("--out", ev.out)->required();

  std::size_t seeds = 10;
  auto* grad_cmd = app.add_subcommand("grad-check", "Finite-difference check of every op and the model loss");
  grad_cmd->add_option("--seeds", seeds)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("bad_input", e.what(), kExitBadInput);
  }

  if (*gen_cmd) return run_gen_data(gen);
  if (*grad_cmd) return run_grad_check(seeds);
  const RunConfig config = resolve_run_config(config_path ? std::optional<fs::path>(*config_path) : std::nullopt);
  if (*label_cmd) return run_label(label, config);
  if (*train_cmd) return run_train(tr, config);
  if (*init_cmd) return run_init(tr, config);
  if (*eval_cmd) return run_eval(ev, config);
  if (*rank_cmd) return run_rank(ev, config);
  if (*bench_cmd) return run_bench(ev, config);
  if (*infer_cmd) return run_infer_mcs(ev, config);
  if (*pe_cmd) return run_export_pe(ev);
  return report("bad_input", "no subcommand", kExitBadInput);
}

}  // namespace
}  // namespace infmcs

int main(int argc, char** argv) {
  using infmcs::ErrorKind;
  try {
    return infmcs::main_impl(argc, argv);
  } catch (const infmcs::Error& e) {
    switch (e.kind()) {
      case ErrorKind::kBadInput: return infmcs::report("bad_input", e.what(), infmcs::kExitBadInput);
      case ErrorKind::kBudgetExceeded: return infmcs::report("budget_exceeded", e.what(), infmcs::kExitBudget);
      case ErrorKind::kNumeric: return infmcs::report("numeric", e.what(), infmcs::kExitNumeric);
    }
  } catch (const std::filesystem::filesystem_error& e) {
    return infmcs::report("bad_input", e.what(), infmcs::kExitBadInput);
  } catch (const std::exception& e) {
    return infmcs::report("bad_input", e.what(), infmcs::kExitBadInput);
  }
  return infmcs::kExitBadInput;
}
