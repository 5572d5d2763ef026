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

#ifndef REPLAYCM_CORE_ERROR_HPP_
#define REPLAYCM_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace replaycm {

// Values are mirrored one-to-one by rc_status in replaycm.h.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIoError = 2,
  // corpus
  kNotFound = 10,
  kUnsupportedFormat = 11,
  kWrongSampleRate = 12,
  kMissingColumn = 13,
  kUnknownLabel = 14,
  kDuplicateUttId = 15,
  kEmptyManifest = 16,
  kInvalidConfig = 17,
  // spectrum
  kInvalidFraming = 20,
  kFftSizeTooSmall = 21,
  kInvalidOutputSize = 22,
  // filterbank
  kOutOfRange = 30,
  kInvalidBand = 31,
  kTooManyFilters = 32,
  kMismatchedConfig = 33,
  kWrongKind = 34,
  kEmptyInput = 35,
  // fratio
  kTooFewFrames = 40,
  kDegenerateBand = 41,
  kUnknownFactor = 42,
  kMismatchedM = 43,
  kZeroPattern = 44,
  // gmm
  kSingularComponent = 50,
  kDimensionMismatch = 51,
  kEmptyUtterance = 52,
  // eval
  kOneClassOnly = 60,
  // archive
  kBadMagic = 70,
  kUnsupportedVersion = 71,
  kTruncated = 72,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(ErrorCodeName(code)) + ": " + what);
}

}  // namespace replaycm

#endif  // REPLAYCM_CORE_ERROR_HPP_
