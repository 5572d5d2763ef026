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


#ifndef REPLAYCM_CORE_SPECTRUM_HPP_
#define REPLAYCM_CORE_SPECTRUM_HPP_

#include <span>
#include <vector>

#include "core/types.hpp"

namespace replaycm {

inline constexpr int kDefaultFrameLen = 400;  // 25 ms at 16 kHz
inline constexpr int kDefaultHop = 160;       // 10 ms
inline constexpr int kDefaultNfft = 512;

struct FrameMatrix {
  Matrix frames;  // n_frames x frame_len
  int frame_len = 0;
  int hop = 0;
  int sample_rate = kSampleRate;
};

struct PowerSpectrogram {
  Matrix values;  // n_frames x (n_fft/2 + 1), |X[k]|^2 without 1/N scaling
  int n_fft = 0;
  int sample_rate = kSampleRate;

  double BinHz(int k) const {
    return static_cast<double>(k) * sample_rate / n_fft;
  }
};

// Number of whole frames; the trailing partial frame is dropped.
long long NumFrames(long long signal_len, int frame_len, int hop);

FrameMatrix FrameSignal(const AudioSignal& signal, int frame_len, int hop);

// Hamming w[n] = 0.54 - 0.46 cos(2 pi n / (len - 1)).
std::vector<double> HammingWindow(int len);

PowerSpectrogram PowerSpectrum(const FrameMatrix& frames, int n_fft);

// Orthonormal DCT-II, first n_out coefficients.
std::vector<double> DctII(std::span<const double> x, int n_out);

// Inverse of the full orthonormal DCT-II (i.e. DCT-III with the same scaling).
std::vector<double> InverseDctII(std::span<const double> y);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_SPECTRUM_HPP_
