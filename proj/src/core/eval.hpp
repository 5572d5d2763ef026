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


#ifndef REPLAYCM_CORE_EVAL_HPP_
#define REPLAYCM_CORE_EVAL_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "core/corpus.hpp"

namespace replaycm {

struct ScoreRecord {
  std::string utt_id;
  double score = 0.0;
  Label label = Label::kGenuine;
};

struct EerResult {
  double eer = 0.0;        // fraction in [0, 1]
  double threshold = 0.0;  // interpolated crossing point
};

// Genuine is the accepted class: FAR(t) = share of replay scores >= t,
// FRR(t) = share of genuine scores < t. Operating points are taken at every
// distinct score (plus one past the top), and the EER is read off where the
// piecewise-linear (FAR, FRR) path crosses FAR == FRR.
EerResult ComputeEer(const std::vector<ScoreRecord>& records);

// TSV "utt_id<TAB>score<TAB>label" with a header line. The label is "-"
// for records whose `labeled` flag is false; such rows read back as genuine
// with the flag cleared.
std::string FormatScores(const std::vector<ScoreRecord>& records,
                         const std::vector<bool>* labeled = nullptr);
std::vector<ScoreRecord> ParseScores(std::string_view text,
                                     std::vector<bool>* labeled = nullptr);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_EVAL_HPP_
