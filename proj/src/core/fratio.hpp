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


#ifndef REPLAYCM_CORE_FRATIO_HPP_
#define REPLAYCM_CORE_FRATIO_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/corpus.hpp"
#include "core/filterbank.hpp"

namespace replaycm {

// Per-band discriminability between genuine and replayed frames:
//   F_i = (mu_g - mu_r)^2 / (var_g + var_r)
// with population (1/N) variances.
struct FRatioPattern {
  std::vector<double> values;
  long long n_genuine_frames = 0;
  long long n_replay_frames = 0;
  WarpKind band_kind = WarpKind::kLinear;
  std::optional<std::pair<std::string, std::string>> condition;

  int num_bands() const { return static_cast<int>(values.size()); }
};

enum class Factor { kSpeaker, kPhrase, kDevice, kDataset };

const char* FactorName(Factor factor);
Factor ParseFactor(std::string_view name);

struct ProbeReport {
  Factor factor = Factor::kDevice;
  std::vector<FRatioPattern> patterns;
  double dispersion = 0.0;
};

inline constexpr double kDegenerateDenominator = 1e-12;

// Frames are rows; both inputs must share the band count.
FRatioPattern ComputeFRatio(const FeatureMatrix& genuine,
                            const FeatureMatrix& replay,
                            WarpKind band_kind = WarpKind::kLinear);

// Same, over frame pools given as lists of matrices (no copying).
FRatioPattern ComputeFRatio(const std::vector<const Matrix*>& genuine,
                            const std::vector<const Matrix*>& replay,
                            WarpKind band_kind = WarpKind::kLinear);

// Mean over bands of the population standard deviation, across patterns,
// of each pattern's L1-normalized values.
double PatternDispersion(const std::vector<FRatioPattern>& patterns);

// Share of the dispersion attributable to each pattern; the shares sum to
// PatternDispersion(patterns).
std::vector<double> DispersionContributions(
    const std::vector<FRatioPattern>& patterns);

using FeatureMap = std::map<std::string, FeatureMatrix, std::less<>>;

// One pattern per distinct value of `factor` (in first-appearance order).
// For the device factor the genuine pool is every genuine frame.
ProbeReport ProbeFactor(const FeatureMap& features, const Manifest& manifest,
                        Factor factor, WarpKind band_kind = WarpKind::kLinear);

// One pattern per named manifest, each pooling all its genuine frames
// against all its replay frames.
ProbeReport ProbeDatasets(
    const FeatureMap& features,
    const std::vector<std::pair<std::string, Manifest>>& datasets,
    WarpKind band_kind = WarpKind::kLinear);

// Rows are factor values; columns F_1..F_M then the dispersion share.
std::string ProbeReportToTsv(const ProbeReport& report);
nlohmann::json ProbeReportToJson(const ProbeReport& report);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_FRATIO_HPP_
