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


#ifndef REPLAYCM_CORE_FILTERBANK_HPP_
#define REPLAYCM_CORE_FILTERBANK_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "core/spectrum.hpp"
#include "core/types.hpp"

namespace replaycm {

enum class WarpKind { kLinear, kMel, kInvertedMel };

// "linear", "mel", "imel".
const char* WarpName(WarpKind kind);
WarpKind ParseWarp(std::string_view name);

double HzToMel(double hz);
double MelToHz(double mel);

// Frequency warping on [0, 8000] Hz. The inverted-Mel axis is the mirror of
// the Mel axis: warp_im(f) = mel(8000) - mel(8000 - f), which stretches the
// high-frequency region the way Mel stretches the low one.
double Warp(WarpKind kind, double hz);
double WarpInverse(WarpKind kind, double warped);

// M triangular filters placed uniformly on a warped frequency axis.
// Immutable once built.
struct FilterBank {
  WarpKind kind = WarpKind::kLinear;
  int num_filters = 0;
  int n_fft = 0;
  int sample_rate = kSampleRate;
  double f_lo = 0.0;
  double f_hi = kNyquistHz;
  Matrix weights;                    // num_filters x (n_fft/2 + 1)
  std::vector<double> edges_warped;  // num_filters + 2 points

  // Edge/center frequency in Hz; index 0..num_filters+1.
  double EdgeHz(int i) const { return WarpInverse(kind, edges_warped[i]); }
};

FilterBank BuildFilterBank(WarpKind kind, int num_filters, int n_fft,
                           int sample_rate, double f_lo, double f_hi);

enum class FeatureKind { kLogFbank, kCepstra, kCepstraWithDeltas };

// "fbank", "cepstra", "cepstra-delta".
const char* FeatureKindName(FeatureKind kind);
FeatureKind ParseFeatureKind(std::string_view name);

inline constexpr int kNumCepstra = 13;
inline constexpr double kLogFloor = 1e-10;

struct FeatureMatrix {
  Matrix values;  // n_frames x dim
  FeatureKind kind = FeatureKind::kLogFbank;

  int dim() const { return static_cast<int>(values.cols()); }
  int num_frames() const { return static_cast<int>(values.rows()); }
};

// (t, i) = ln(max(sum_k w_i[k] * spec[t, k], 1e-10)).
FeatureMatrix FbankFeatures(const PowerSpectrogram& spec, const FilterBank& fb);

// Orthonormal DCT over each log-Fbank frame, keeping c0..c12.
FeatureMatrix CepstralFeatures(const FeatureMatrix& log_fbank);

// Regression deltas over +-window frames with edge replication; the output
// is [cepstra | deltas].
FeatureMatrix AppendDeltas(const FeatureMatrix& cepstra, int window = 2);

struct ExtractionConfig {
  WarpKind warp = WarpKind::kLinear;
  FeatureKind feature = FeatureKind::kLogFbank;
  int bands = 23;
  int frame_len = kDefaultFrameLen;
  int hop = kDefaultHop;
  int n_fft = kDefaultNfft;
  double f_lo = 0.0;
  double f_hi = kNyquistHz;
  int delta_window = 2;

  bool operator==(const ExtractionConfig&) const = default;
};

// Human-readable tag such as "IMFCC+Δ" or "IM-Fbank".
std::string FeatureTag(const ExtractionConfig& config);

// Full front end for one utterance. `fb` must match `config`.
FeatureMatrix ExtractFeatures(const AudioSignal& signal,
                              const ExtractionConfig& config,
                              const FilterBank& fb);

FilterBank BuildFilterBank(const ExtractionConfig& config);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_FILTERBANK_HPP_
