// Copyright 2026 The nlic Authors.
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

#ifndef NLIC_ERROR_H_
#define NLIC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlic {

enum class ErrorKind {
  kEmptyInput,
  kUnsupportedGranularity,
  kEmptyPair,
  kBackendUnavailable,
  kFixtureMiss,
  kDimensionZero,
  kOutOfRangeScore,
  kModelShapeMismatch,
  kDegenerateLabels,
  kSchemaMismatch,
  kSingleClassLabels,
  kUnequalRaterCounts,
  kUndefinedAgreement,
  kExtractorUnavailable,
  kInvalidArgument,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this type; `kind()` is stable
// and the CLI maps it onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nlic

#endif  // NLIC_ERROR_H_
