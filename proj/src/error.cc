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

#include "nlic/error.h"

namespace nlic {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kUnsupportedGranularity: return "UnsupportedGranularity";
    case ErrorKind::kEmptyPair: return "EmptyPair";
    case ErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case ErrorKind::kFixtureMiss: return "FixtureMiss";
    case ErrorKind::kDimensionZero: return "DimensionZero";
    case ErrorKind::kOutOfRangeScore: return "OutOfRangeScore";
    case ErrorKind::kModelShapeMismatch: return "ModelShapeMismatch";
    case ErrorKind::kDegenerateLabels: return "DegenerateLabels";
    case ErrorKind::kSchemaMismatch: return "SchemaMismatch";
    case ErrorKind::kSingleClassLabels: return "SingleClassLabels";
    case ErrorKind::kUnequalRaterCounts: return "UnequalRaterCounts";
    case ErrorKind::kUndefinedAgreement: return "UndefinedAgreement";
    case ErrorKind::kExtractorUnavailable: return "ExtractorUnavailable";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace nlic
