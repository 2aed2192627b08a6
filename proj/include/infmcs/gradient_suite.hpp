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

#include <cstdint>
#include <string>
#include <vector>

namespace infmcs {

struct GradCheckReport {
  std::string name;
  double max_error = 0.0;  // worst relative error over all seeds
};

/// Finite-difference check of every differentiable op on random inputs,
/// seeds 0..seeds-1.
std::vector<GradCheckReport> check_op_gradients(std::size_t seeds);

/// Loss gradient of a small model on a random 6-node pair with respect to the
/// temperature parameter and the positional dictionary. Worst error over
/// seeds 0..seeds-1.
GradCheckReport check_model_gradients(std::size_t seeds);

}  // namespace infmcs
