// Copyright 2026 The replaycm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/error.hpp"

namespace replaycm {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kWrongSampleRate: return "WrongSampleRate";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kDuplicateUttId: return "DuplicateUttId";
    case ErrorCode::kEmptyManifest: return "EmptyManifest";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidFraming: return "InvalidFraming";
    case ErrorCode::kFftSizeTooSmall: return "FftSizeTooSmall";
    case ErrorCode::kInvalidOutputSize: return "InvalidOutputSize";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInvalidBand: return "InvalidBand";
    case ErrorCode::kTooManyFilters: return "TooManyFilters";
    case ErrorCode::kMismatchedConfig: return "MismatchedConfig";
    case ErrorCode::kWrongKind: return "WrongKind";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kDegenerateBand: return "DegenerateBand";
    case ErrorCode::kUnknownFactor: return "UnknownFactor";
    case ErrorCode::kMismatchedM: return "MismatchedM";
    case ErrorCode::kZeroPattern: return "ZeroPattern";
    case ErrorCode::kSingularComponent: return "SingularComponent";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyUtterance: return "EmptyUtterance";
    case ErrorCode::kOneClassOnly: return "OneClassOnly";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncated: return "Truncated";
  }
  return "Unknown";
}

}  // namespace replaycm
