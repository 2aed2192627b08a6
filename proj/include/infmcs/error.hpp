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

#include <stdexcept>
#include <string>

namespace infmcs {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kBadInput,        // malformed files, invalid arguments, precondition violations
  kBudgetExceeded,  // an oracle ran out of its time budget
  kNumeric,         // NaN/Inf detected
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error BadInput(const std::string& what) {
  return Error(ErrorKind::kBadInput, what);
}

inline Error NumericFailure(const std::string& what) {
  return Error(ErrorKind::kNumeric, what);
}

}  // namespace infmcs
