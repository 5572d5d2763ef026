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


#include "core/fratio.hpp"

#include <cmath>
#include <set>

#include "core/error.hpp"
#include "core/format.hpp"

namespace replaycm {

namespace {

struct BandMoments {
  std::vector<double> mean;
  std::vector<double> var;  // population
  long long n = 0;
};

// Two passes in a fixed row order so repeated runs agree bit for bit.
BandMoments Moments(const std::vector<const Matrix*>& pool, int m) {
  BandMoments out;
  out.mean.assign(m, 0.0);
  out.var.assign(m, 0.0);
  for (const Matrix* x : pool) {
    if (x->cols() != m)
      Fail(ErrorCode::kDimensionMismatch,
           "pooled matrices disagree on band count");
    out.n += x->rows();
    for (Eigen::Index t = 0; t < x->rows(); ++t)
      for (int i = 0; i < m; ++i) out.mean[i] += (*x)(t, i);
  }
  if (out.n == 0) return out;
  for (double& v : out.mean) v /= static_cast<double>(out.n);
  for (const Matrix* x : pool)
    for (Eigen::Index t = 0; t < x->rows(); ++t)
      for (int i = 0; i < m; ++i) {
        const double d = (*x)(t, i) - out.mean[i];
        out.var[i] += d * d;
      }
  for (double& v : out.var) v /= static_cast<double>(out.n);
  return out;
}

std::vector<double> L1Normalized(const FRatioPattern& p) {
  double mass = 0.0;
  for (double v : p.values) mass += std::abs(v);
  if (!(mass > 0.0))
    Fail(ErrorCode::kZeroPattern, "pattern with zero mass cannot be normalized");
  std::vector<double> out(p.values.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = p.values[i] / mass;
  return out;
}

// normalized[p][i], per-band mean and population std.
struct Spread {
  std::vector<std::vector<double>> normalized;
  std::vector<double> mean;
  std::vector<double> stddev;
};

Spread ComputeSpread(const std::vector<FRatioPattern>& patterns) {
  if (patterns.empty())
    Fail(ErrorCode::kInvalidArgument, "dispersion needs at least one pattern");
  const int m = patterns.front().num_bands();
  Spread s;
  for (const auto& p : patterns) {
    if (p.num_bands() != m)
      Fail(ErrorCode::kMismatchedM, "patterns disagree on band count");
    s.normalized.push_back(L1Normalized(p));
  }
  const double n = static_cast<double>(patterns.size());
  s.mean.assign(m, 0.0);
  s.stddev.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (const auto& q : s.normalized) s.mean[i] += q[i];
    s.mean[i] /= n;
    double acc = 0.0;
    for (const auto& q : s.normalized) acc += (q[i] - s.mean[i]) * (q[i] - s.mean[i]);
    s.stddev[i] = std::sqrt(acc / n);
  }
  return s;
}

std::string FactorValue(const UtteranceMeta& r, Factor factor) {
  switch (factor) {
    case Factor::kSpeaker: return r.speaker_id;
    case Factor::kPhrase: return r.phrase_id;
    case Factor::kDevice: return r.device_id;
    case Factor::kDataset: break;
  }
  Fail(ErrorCode::kUnknownFactor, "dataset is not a per-utterance factor");
}

const Matrix* Lookup(const FeatureMap& features, const std::string& utt_id) {
  auto it = features.find(utt_id);
  if (it == features.end())
    Fail(ErrorCode::kNotFound, "no features for utterance '" + utt_id + "'");
  if (it->second.kind != FeatureKind::kLogFbank)
    Fail(ErrorCode::kWrongKind, "F-ratio probing needs log-Fbank features");
  return &it->second.values;
}

FRatioPattern PoolPattern(const FeatureMap& features,
                          const std::vector<const UtteranceMeta*>& genuine,
                          const std::vector<const UtteranceMeta*>& replay,
                          WarpKind band_kind, std::string factor,
                          std::string value) {
  std::vector<const Matrix*> g, r;
  for (const auto* u : genuine) g.push_back(Lookup(features, u->utt_id));
  for (const auto* u : replay) r.push_back(Lookup(features, u->utt_id));
  try {
    FRatioPattern p = ComputeFRatio(g, r, band_kind);
    p.condition = std::make_pair(factor, value);
    return p;
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " [" + factor + "=" +
                              value + "]");
  }
}

ProbeReport Finish(ProbeReport report) {
  report.dispersion = PatternDispersion(report.patterns);
  return report;
}

}  // namespace

const char* FactorName(Factor factor) {
  switch (factor) {
    case Factor::kSpeaker: return "speaker";
    case Factor::kPhrase: return "phrase";
    case Factor::kDevice: return "device";
    case Factor::kDataset: return "dataset";
  }
  return "?";
}

Factor ParseFactor(std::string_view name) {
  if (name == "speaker") return Factor::kSpeaker;
  if (name == "phrase") return Factor::kPhrase;
  if (name == "device") return Factor::kDevice;
  if (name == "dataset") return Factor::kDataset;
  Fail(ErrorCode::kUnknownFactor, "factor '" + std::string(name) + "'");
}

FRatioPattern ComputeFRatio(const std::vector<const Matrix*>& genuine,
                            const std::vector<const Matrix*>& replay,
                            WarpKind band_kind) {
  const Matrix* first = !genuine.empty() ? genuine.front()
                        : !replay.empty() ? replay.front()
                                          : nullptr;
  if (first == nullptr)
    Fail(ErrorCode::kTooFewFrames, "both frame pools are empty");
  const int m = static_cast<int>(first->cols());
  const BandMoments g = Moments(genuine, m);
  const BandMoments r = Moments(replay, m);
  if (g.n < 2 || r.n < 2)
    Fail(ErrorCode::kTooFewFrames,
         "need >= 2 frames per class, got genuine=" + std::to_string(g.n) +
             " replay=" + std::to_string(r.n));

  FRatioPattern p;
  p.values.resize(m);
  p.n_genuine_frames = g.n;
  p.n_replay_frames = r.n;
  p.band_kind = band_kind;
  for (int i = 0; i < m; ++i) {
    const double denom = g.var[i] + r.var[i];
    if (!(denom >= kDegenerateDenominator))
      Fail(ErrorCode::kDegenerateBand,
           "band " + std::to_string(i + 1) + " has within-class variance " +
               FormatDouble(denom));
    const double diff = g.mean[i] - r.mean[i];
    p.values[i] = diff * diff / denom;
  }
  return p;
}

FRatioPattern ComputeFRatio(const FeatureMatrix& genuine,
                            const FeatureMatrix& replay, WarpKind band_kind) {
  if (genuine.dim() != replay.dim())
    Fail(ErrorCode::kDimensionMismatch,
         "genuine has " + std::to_string(genuine.dim()) + " bands, replay " +
             std::to_string(replay.dim()));
  return ComputeFRatio(std::vector<const Matrix*>{&genuine.values},
                       std::vector<const Matrix*>{&replay.values}, band_kind);
}

double PatternDispersion(const std::vector<FRatioPattern>& patterns) {
  const Spread s = ComputeSpread(patterns);
  double acc = 0.0;
  for (double v : s.stddev) acc += v;
  return acc / static_cast<double>(s.stddev.size());
}

std::vector<double> DispersionContributions(
    const std::vector<FRatioPattern>& patterns) {
  const Spread s = ComputeSpread(patterns);
  const size_t m = s.stddev.size();
  const double n = static_cast<double>(patterns.size());
  std::vector<double> out(patterns.size(), 0.0);
  // sum_p (q_pi - mean_i)^2 / (n * std_i) == std_i, so the shares add up.
  for (size_t p = 0; p < patterns.size(); ++p) {
    double acc = 0.0;
    for (size_t i = 0; i < m; ++i) {
      if (s.stddev[i] <= 0.0) continue;
      const double d = s.normalized[p][i] - s.mean[i];
      acc += d * d / (n * s.stddev[i]);
    }
    out[p] = acc / static_cast<double>(m);
  }
  return out;
}

ProbeReport ProbeFactor(const FeatureMap& features, const Manifest& manifest,
                        Factor factor, WarpKind band_kind) {
  if (factor == Factor::kDataset)
    Fail(ErrorCode::kUnknownFactor,
         "the dataset factor compares manifests; use ProbeDatasets");
  std::vector<std::string> values;
  std::set<std::string> seen;
  for (const auto& r : manifest.records) {
    if (factor == Factor::kDevice && r.label == Label::kGenuine) continue;
    std::string v = FactorValue(r, factor);
    if (seen.insert(v).second) values.push_back(std::move(v));
  }

  std::vector<const UtteranceMeta*> all_genuine;
  for (const auto& r : manifest.records)
    if (r.label == Label::kGenuine) all_genuine.push_back(&r);

  ProbeReport report;
  report.factor = factor;
  for (const auto& v : values) {
    std::vector<const UtteranceMeta*> genuine, replay;
    for (const auto& r : manifest.records) {
      if (r.label == Label::kReplay && FactorValue(r, factor) == v)
        replay.push_back(&r);
      else if (r.label == Label::kGenuine && factor != Factor::kDevice &&
               FactorValue(r, factor) == v)
        genuine.push_back(&r);
    }
    report.patterns.push_back(PoolPattern(
        features, factor == Factor::kDevice ? all_genuine : genuine, replay,
        band_kind, FactorName(factor), v));
  }
  if (report.patterns.empty())
    Fail(ErrorCode::kTooFewFrames,
         std::string("no values of factor ") + FactorName(factor));
  return Finish(std::move(report));
}

ProbeReport ProbeDatasets(
    const FeatureMap& features,
    const std::vector<std::pair<std::string, Manifest>>& datasets,
    WarpKind band_kind) {
  ProbeReport report;
  report.factor = Factor::kDataset;
  for (const auto& [name, manifest] : datasets) {
    std::vector<const UtteranceMeta*> genuine, replay;
    for (const auto& r : manifest.records)
      (r.label == Label::kGenuine ? genuine : replay).push_back(&r);
    report.patterns.push_back(
        PoolPattern(features, genuine, replay, band_kind, "dataset", name));
  }
  if (report.patterns.empty())
    Fail(ErrorCode::kInvalidArgument, "no datasets to compare");
  return Finish(std::move(report));
}

std::string ProbeReportToTsv(const ProbeReport& report) {
  const int m = report.patterns.front().num_bands();
  std::string out = FactorName(report.factor);
  for (int i = 1; i <= m; ++i) out += "\tF_" + std::to_string(i);
  out += "\tdispersion_contribution\n";
  const std::vector<double> share = DispersionContributions(report.patterns);
  for (size_t p = 0; p < report.patterns.size(); ++p) {
    const auto& pat = report.patterns[p];
    out += pat.condition ? pat.condition->second : std::string("-");
    for (double v : pat.values) out += '\t' + FormatDouble(v);
    out += '\t' + FormatDouble(share[p]) + '\n';
  }
  return out;
}

nlohmann::json ProbeReportToJson(const ProbeReport& report) {
  nlohmann::json patterns = nlohmann::json::array();
  const std::vector<double> share = DispersionContributions(report.patterns);
  for (size_t p = 0; p < report.patterns.size(); ++p) {
    const auto& pat = report.patterns[p];
    patterns.push_back(
        {{"value", pat.condition ? pat.condition->second : std::string("-")},
         {"fratio", pat.values},
         {"n_genuine_frames", pat.n_genuine_frames},
         {"n_replay_frames", pat.n_replay_frames},
         {"dispersion_contribution", share[p]}});
  }
  return {{"factor", FactorName(report.factor)},
          {"band_kind", WarpName(report.patterns.front().band_kind)},
          {"bands", report.patterns.front().num_bands()},
          {"dispersion", report.dispersion},
          {"patterns", patterns}};
}

}  // namespace replaycm
