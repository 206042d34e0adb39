// Copyright 2026 The smart Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smart {

enum class ErrorCode {
  kDegenerateEmbedding,
  kDimensionMismatch,
  kInvalidProbability,
  kShapeMismatch,
  kInvalidHyperparameter,
  kNumericalError,
  kAsymmetry,
  kSingularSubmatrix,
  kEmptyPool,
  kBudgetExceeded,
  kProviderUnavailable,
  kProtocolViolation,
  kInvalidInput,
  kIo,
  kInternal,
};

// Stable name used in structured error records ("DegenerateEmbedding", ...).
std::string_view error_code_name(ErrorCode code);

// All library failures are reported as smart::Error. `location` carries the
// offending indices (matrix row/column, embedding position) when there are any.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::size_t> location = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::size_t>& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::vector<std::size_t> location_;
};

}  // namespace smart
