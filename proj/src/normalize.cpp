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

#include <cmath>

#include "infmcs/oracles.hpp"

namespace infmcs {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kExact: return "exact";
    case Provenance::kBeam: return "beam";
    case Provenance::kHungarian: return "hungarian";
    case Provenance::kFallbackMin: return "fallback_min";
  }
  return "exact";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "exact") return Provenance::kExact;
  if (s == "beam") return Provenance::kBeam;
  if (s == "hungarian") return Provenance::kHungarian;
  if (s == "fallback_min") return Provenance::kFallbackMin;
  throw BadInput("unknown provenance '" + std::string(s) + "'");
}

namespace {
double mean_size(const Graph& g1, const Graph& g2) {
  const double mean = (static_cast<double>(g1.node_count()) + static_cast<double>(g2.node_count())) / 2.0;
  if (mean <= 0.0) throw BadInput("similarity normalisation needs at least one node");
  return mean;
}
}  // namespace

double nmcs(const Graph& g1, const Graph& g2, std::size_t mcs_value) {
  return static_cast<double>(mcs_value) / mean_size(g1, g2);
}

double nged(const Graph& g1, const Graph& g2, double ged_value) {
  return std::exp(-ged_value / mean_size(g1, g2));
}

}  // namespace infmcs
