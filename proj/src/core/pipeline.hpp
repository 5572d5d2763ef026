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


#ifndef REPLAYCM_CORE_PIPELINE_HPP_
#define REPLAYCM_CORE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/archive.hpp"
#include "core/corpus.hpp"
#include "core/eval.hpp"
#include "core/fratio.hpp"
#include "core/gmm.hpp"

namespace replaycm {

// Audio paths in the manifest are resolved against `base_dir` unless
// absolute.
FeatureArchive ExtractArchive(const Manifest& manifest,
                              const std::filesystem::path& base_dir,
                              const ExtractionConfig& config);
FeatureArchive ExtractArchive(const std::vector<AudioSignal>& signals,
                              const Manifest& manifest,
                              const ExtractionConfig& config);

struct PairTrainOptions {
  int n_comp = 64;
  CovarianceKind covariance = CovarianceKind::kDiag;
  TrainConfig train;
  uint64_t seed = 0;
};

// Trains the genuine model on the manifest's genuine utterances and the
// replay model on its replay utterances.
GmmPairModel TrainPair(const FeatureArchive& archive, const Manifest& manifest,
                       const PairTrainOptions& options);

// Scores every archive entry (in utt_id order). Labels come from `manifest`
// when given; entries it does not list keep the genuine default.
std::vector<ScoreRecord> ScoreArchive(const GmmPairModel& model,
                                      const FeatureArchive& archive,
                                      const Manifest* manifest = nullptr);

// EER over the scored utterances, labelled from the manifest.
EerResult EvaluateScores(const std::vector<ScoreRecord>& scores,
                         const Manifest& manifest);

// Device-disjoint split of a synthetic corpus: the first half of the
// repetitions with train-pool (D..) devices, the rest with held-out (H..)
// devices.
struct CorpusSplit {
  Manifest train;
  Manifest heldout;
};
CorpusSplit SplitByDevice(const Manifest& manifest, int reps);

struct StudyOptions {
  SynthConfig corpus;  // defaults: 6 speakers, 4 phrases, 3+3 devices, 2 reps
  int bands = 23;
  int n_comp = 32;
  TrainConfig train{.max_iters = 50};
  bool write_audio = true;
};

struct StudyReport {
  nlohmann::json doc;  // the full report, also written to study_report.json

  // dispersion[fbank][factor], fbank in {linear, mel, imel},
  // factor in {speaker, phrase, device, dataset}.
  double Dispersion(const std::string& fbank, const std::string& factor) const;
  // eer[feature][cov], feature in {LFCC, MFCC, IMFCC}, cov in {diag, full}.
  double Eer(const std::string& feature, const std::string& cov) const;
};

// End-to-end run on a synthetic corpus. Everything written under `out_dir`
// is a deterministic function of (seed, options).
StudyReport RunStudy(uint64_t seed, const std::filesystem::path& out_dir,
                     const StudyOptions& options = {});

}  // namespace replaycm

#endif  // REPLAYCM_CORE_PIPELINE_HPP_
