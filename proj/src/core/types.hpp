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


#ifndef REPLAYCM_CORE_TYPES_HPP_
#define REPLAYCM_CORE_TYPES_HPP_

#include <vector>

#include <Eigen/Core>

namespace replaycm {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr int kSampleRate = 16000;
inline constexpr double kNyquistHz = 8000.0;

// Mono PCM audio with amplitudes in [-1, 1).
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = kSampleRate;
};

}  // namespace replaycm

#endif  // REPLAYCM_CORE_TYPES_HPP_
