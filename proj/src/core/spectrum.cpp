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


#include "core/spectrum.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "core/error.hpp"
#include "core/fft.hpp"

namespace replaycm {

long long NumFrames(long long signal_len, int frame_len, int hop) {
  if (signal_len < frame_len) return 0;
  return (signal_len - frame_len) / hop + 1;
}

FrameMatrix FrameSignal(const AudioSignal& signal, int frame_len, int hop) {
  if (frame_len <= 0 || hop <= 0 || hop > frame_len)
    Fail(ErrorCode::kInvalidFraming,
         "need 0 < hop <= frame_len, got frame_len=" +
             std::to_string(frame_len) + " hop=" + std::to_string(hop));
  const long long n =
      NumFrames(static_cast<long long>(signal.samples.size()), frame_len, hop);
  FrameMatrix out;
  out.frame_len = frame_len;
  out.hop = hop;
  out.sample_rate = signal.sample_rate;
  out.frames.resize(n, frame_len);
  for (long long i = 0; i < n; ++i)
    for (int j = 0; j < frame_len; ++j)
      out.frames(i, j) = signal.samples[i * hop + j];
  return out;
}

std::vector<double> HammingWindow(int len) {
  std::vector<double> w(len, 1.0);
  if (len == 1) return w;
  for (int n = 0; n < len; ++n)
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
  return w;
}

PowerSpectrogram PowerSpectrum(const FrameMatrix& frames, int n_fft) {
  if (!IsPowerOfTwo(n_fft) || n_fft < frames.frame_len)
    Fail(ErrorCode::kFftSizeTooSmall,
         "n_fft=" + std::to_string(n_fft) +
             " must be a power of two >= frame_len=" +
             std::to_string(frames.frame_len));
  PowerSpectrogram out;
  out.n_fft = n_fft;
  out.sample_rate = frames.sample_rate;
  const int n_bins = n_fft / 2 + 1;
  out.values.resize(frames.frames.rows(), n_bins);
  if (frames.frames.rows() == 0) return out;

  const std::vector<double> window = HammingWindow(frames.frame_len);
  RealFft fft(n_fft);
  std::vector<double> buf(frames.frame_len);
  std::vector<std::complex<double>> spec(n_bins);
  for (Eigen::Index t = 0; t < frames.frames.rows(); ++t) {
    for (int n = 0; n < frames.frame_len; ++n)
      buf[n] = frames.frames(t, n) * window[n];
    fft.Forward(buf, spec);
    for (int k = 0; k < n_bins; ++k) out.values(t, k) = std::norm(spec[k]);
  }
  return out;
}

std::vector<double> DctII(std::span<const double> x, int n_out) {
  const int n = static_cast<int>(x.size());
  if (n_out < 1 || n_out > n)
    Fail(ErrorCode::kInvalidOutputSize,
         "n_out=" + std::to_string(n_out) + " outside [1, " +
             std::to_string(n) + "]");
  std::vector<double> y(n_out);
  const double a0 = std::sqrt(1.0 / n), ak = std::sqrt(2.0 / n);
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += x[i] * std::cos(std::numbers::pi * k * (2 * i + 1) / (2.0 * n));
    y[k] = (k == 0 ? a0 : ak) * acc;
  }
  return y;
}

std::vector<double> InverseDctII(std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  if (n < 1) Fail(ErrorCode::kInvalidOutputSize, "empty DCT input");
  std::vector<double> x(n);
  const double a0 = std::sqrt(1.0 / n), ak = std::sqrt(2.0 / n);
  for (int i = 0; i < n; ++i) {
    double acc = a0 * y[0];
    for (int k = 1; k < n; ++k)
      acc += ak * y[k] *
             std::cos(std::numbers::pi * k * (2 * i + 1) / (2.0 * n));
    x[i] = acc;
  }
  return x;
}

}  // namespace replaycm
