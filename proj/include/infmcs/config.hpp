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
#include <optional>
#include <string>

#include "infmcs/dataset.hpp"
#include "infmcs/model.hpp"
#include "infmcs/trainer.hpp"

namespace infmcs {

/// Environment variable naming the config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "INFMCS_CONFIG";

struct OracleConfig {
  double mcs_budget_seconds = 10.0;
  double astar_budget_seconds = 10.0;
  std::size_t beam_width = 100;
  bool label_aware = true;
  std::size_t jobs = 1;

  LabelOptions label_options() const;
};

/// Everything a run needs. JSON layout:
///   {"model": {...}, "train": {...}, "oracle": {...}, "paths": {"manifest", "out"}}
/// Every section and key is optional; unknown keys are errors.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  OracleConfig oracle;
  std::filesystem::path manifest;
  std::filesystem::path out;
};

RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

/// `explicit_path` if given, else the file named by INFMCS_CONFIG, else
/// defaults.
RunConfig resolve_run_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace infmcs
