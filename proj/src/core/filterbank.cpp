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


#include "core/filterbank.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace replaycm {

namespace {

constexpr double kWarpSlack = 1e-9;

const double kMelNyquist = HzToMel(kNyquistHz);

void CheckHz(double hz) {
  if (!(hz >= -kWarpSlack && hz <= kNyquistHz + kWarpSlack))
    Fail(ErrorCode::kOutOfRange,
         "frequency " + std::to_string(hz) + " Hz outside [0, 8000]");
}

}  // namespace

const char* WarpName(WarpKind kind) {
  switch (kind) {
    case WarpKind::kLinear: return "linear";
    case WarpKind::kMel: return "mel";
    case WarpKind::kInvertedMel: return "imel";
  }
  return "?";
}

WarpKind ParseWarp(std::string_view name) {
  if (name == "linear") return WarpKind::kLinear;
  if (name == "mel") return WarpKind::kMel;
  if (name == "imel") return WarpKind::kInvertedMel;
  Fail(ErrorCode::kInvalidArgument, "unknown warp '" + std::string(name) + "'");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

double Warp(WarpKind kind, double hz) {
  CheckHz(hz);
  hz = std::clamp(hz, 0.0, kNyquistHz);
  switch (kind) {
    case WarpKind::kLinear: return hz;
    case WarpKind::kMel: return HzToMel(hz);
    case WarpKind::kInvertedMel: return kMelNyquist - HzToMel(kNyquistHz - hz);
  }
  return hz;
}

double WarpInverse(WarpKind kind, double warped) {
  const double top = kind == WarpKind::kLinear ? kNyquistHz : kMelNyquist;
  if (!(warped >= -kWarpSlack && warped <= top + kWarpSlack))
    Fail(ErrorCode::kOutOfRange, "warped coordinate " +
                                     std::to_string(warped) + " outside [0, " +
                                     std::to_string(top) + "]");
  warped = std::clamp(warped, 0.0, top);
  switch (kind) {
    case WarpKind::kLinear: return warped;
    case WarpKind::kMel: return MelToHz(warped);
    case WarpKind::kInvertedMel:
      return kNyquistHz - MelToHz(kMelNyquist - warped);
  }
  return warped;
}

FilterBank BuildFilterBank(WarpKind kind, int num_filters, int n_fft,
                           int sample_rate, double f_lo, double f_hi) {
  if (num_filters < 1)
    Fail(ErrorCode::kInvalidBand, "need at least one filter");
  if (!(f_lo >= 0.0 && f_lo < f_hi && f_hi <= sample_rate / 2.0 &&
        f_hi <= kNyquistHz))
    Fail(ErrorCode::kInvalidBand, "need 0 <= f_lo < f_hi <= " +
                                      std::to_string(sample_rate / 2) +
                                      " Hz, got [" + std::to_string(f_lo) +
                                      ", " + std::to_string(f_hi) + "]");
  FilterBank fb;
  fb.kind = kind;
  fb.num_filters = num_filters;
  fb.n_fft = n_fft;
  fb.sample_rate = sample_rate;
  fb.f_lo = f_lo;
  fb.f_hi = f_hi;

  const double w_lo = Warp(kind, f_lo), w_hi = Warp(kind, f_hi);
  const double step = (w_hi - w_lo) / (num_filters + 1);
  fb.edges_warped.resize(num_filters + 2);
  for (int i = 0; i < num_filters + 2; ++i)
    fb.edges_warped[i] = w_lo + i * step;
  fb.edges_warped.back() = w_hi;

  const int n_bins = n_fft / 2 + 1;
  fb.weights = Matrix::Zero(num_filters, n_bins);
  for (int k = 0; k < n_bins; ++k) {
    const double hz = static_cast<double>(k) * sample_rate / n_fft;
    if (hz < f_lo || hz > f_hi) continue;
    const double w = Warp(kind, hz);
    for (int m = 0; m < num_filters; ++m) {
      const double left = fb.edges_warped[m];
      const double center = fb.edges_warped[m + 1];
      const double right = fb.edges_warped[m + 2];
      if (w > left && w <= center)
        fb.weights(m, k) = (w - left) / (center - left);
      else if (w > center && w < right)
        fb.weights(m, k) = (right - w) / (right - center);
    }
  }
  for (int m = 0; m < num_filters; ++m) {
    if (fb.weights.row(m).maxCoeff() <= 0.0)
      Fail(ErrorCode::kTooManyFilters,
           "filter " + std::to_string(m + 1) + " of " +
               std::to_string(num_filters) + " (" + WarpName(kind) +
               ") covers no FFT bin at n_fft=" + std::to_string(n_fft));
  }
  return fb;
}

const char* FeatureKindName(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kLogFbank: return "fbank";
    case FeatureKind::kCepstra: return "cepstra";
    case FeatureKind::kCepstraWithDeltas: return "cepstra-delta";
  }
  return "?";
}

FeatureKind ParseFeatureKind(std::string_view name) {
  if (name == "fbank") return FeatureKind::kLogFbank;
  if (name == "cepstra") return FeatureKind::kCepstra;
  if (name == "cepstra-delta") return FeatureKind::kCepstraWithDeltas;
  Fail(ErrorCode::kInvalidArgument,
       "unknown feature kind '" + std::string(name) + "'");
}

FeatureMatrix FbankFeatures(const PowerSpectrogram& spec,
                            const FilterBank& fb) {
  if (spec.n_fft != fb.n_fft || spec.sample_rate != fb.sample_rate)
    Fail(ErrorCode::kMismatchedConfig,
         "spectrogram (n_fft=" + std::to_string(spec.n_fft) +
             ", sr=" + std::to_string(spec.sample_rate) +
             ") does not match filterbank (n_fft=" + std::to_string(fb.n_fft) +
             ", sr=" + std::to_string(fb.sample_rate) + ")");
  FeatureMatrix out;
  out.kind = FeatureKind::kLogFbank;
  out.values = spec.values * fb.weights.transpose();
  out.values = out.values.unaryExpr(
      [](double e) { return std::log(std::max(e, kLogFloor)); });
  return out;
}

FeatureMatrix CepstralFeatures(const FeatureMatrix& log_fbank) {
  if (log_fbank.kind != FeatureKind::kLogFbank)
    Fail(ErrorCode::kWrongKind, "cepstra need log-Fbank input");
  FeatureMatrix out;
  out.kind = FeatureKind::kCepstra;
  const int m = log_fbank.dim();
  out.values.resize(log_fbank.num_frames(), kNumCepstra);
  std::vector<double> row(m);
  for (int t = 0; t < log_fbank.num_frames(); ++t) {
    for (int i = 0; i < m; ++i) row[i] = log_fbank.values(t, i);
    const std::vector<double> c = DctII(row, kNumCepstra);
    for (int k = 0; k < kNumCepstra; ++k) out.values(t, k) = c[k];
  }
  return out;
}

FeatureMatrix AppendDeltas(const FeatureMatrix& cepstra, int window) {
  if (cepstra.kind != FeatureKind::kCepstra)
    Fail(ErrorCode::kWrongKind, "deltas are appended to cepstra only");
  if (window < 1) Fail(ErrorCode::kInvalidArgument, "delta window must be >= 1");
  const int n = cepstra.num_frames(), d = cepstra.dim();
  if (n < 1) Fail(ErrorCode::kEmptyInput, "no frames to differentiate");

  double denom = 0.0;
  for (int k = 1; k <= window; ++k) denom += 2.0 * k * k;

  FeatureMatrix out;
  out.kind = FeatureKind::kCepstraWithDeltas;
  out.values.resize(n, 2 * d);
  out.values.leftCols(d) = cepstra.values;
  for (int t = 0; t < n; ++t) {
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 1; k <= window; ++k) {
        const int ahead = std::min(t + k, n - 1);
        const int behind = std::max(t - k, 0);
        acc += k * (cepstra.values(ahead, j) - cepstra.values(behind, j));
      }
      out.values(t, d + j) = acc / denom;
    }
  }
  return out;
}

std::string FeatureTag(const ExtractionConfig& config) {
  const char* prefix = config.warp == WarpKind::kLinear ? "L"
                       : config.warp == WarpKind::kMel  ? "M"
                                                        : "IM";
  switch (config.feature) {
    case FeatureKind::kLogFbank: return std::string(prefix) + "-Fbank";
    case FeatureKind::kCepstra: return std::string(prefix) + "FCC";
    case FeatureKind::kCepstraWithDeltas:
      return std::string(prefix) + "FCC+\xCE\x94";
  }
  return prefix;
}

FilterBank BuildFilterBank(const ExtractionConfig& config) {
  return BuildFilterBank(config.warp, config.bands, config.n_fft, kSampleRate,
                         config.f_lo, config.f_hi);
}

FeatureMatrix ExtractFeatures(const AudioSignal& signal,
                              const ExtractionConfig& config,
                              const FilterBank& fb) {
  const FrameMatrix frames =
      FrameSignal(signal, config.frame_len, config.hop);
  FeatureMatrix feats = FbankFeatures(PowerSpectrum(frames, config.n_fft), fb);
  if (config.feature == FeatureKind::kLogFbank) return feats;
  feats = CepstralFeatures(feats);
  if (config.feature == FeatureKind::kCepstra) return feats;
  return AppendDeltas(feats, config.delta_window);
}

}  // namespace replaycm
