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


// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "core/archive.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/filterbank.hpp"
#include "core/fratio.hpp"
#include "core/gmm.hpp"
#include "core/pipeline.hpp"
#include "core/spectrum.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

namespace replaycm {
namespace {

namespace fs = std::filesystem;
using testing::Gen;
using testing::ScratchDir;
using Clock = std::chrono::steady_clock;

// Collects the first failure of a criterion.
class Check {
 public:
  void That(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  void Near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream ss;
      ss.precision(17);
      ss << what << ": got " << got << ", want " << want << " +- " << tol;
      That(false, ss.str());
    }
  }
  void Note(const std::string& s) { note_ += (note_.empty() ? "" : "; ") + s; }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  const std::string& note() const { return note_; }

 private:
  std::string failure_;
  std::string note_;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

FeatureMatrix Fbank(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix f;
  f.values = Matrix(rows.size(), rows[0].size());
  for (size_t t = 0; t < rows.size(); ++t)
    for (size_t i = 0; i < rows[t].size(); ++i) f.values(t, i) = rows[t][i];
  return f;
}

void FRatioOracleEquivalence(Check& c) {
  const auto start = Clock::now();
  Gen gen(101);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = gen.Int(1, 6);
    auto rows = [&](int n) {
      std::vector<std::vector<double>> out(n, std::vector<double>(m));
      const double shift = gen.Uniform(-3, 3), scale = gen.Uniform(0.1, 5);
      for (auto& r : out)
        for (double& v : r) v = shift + scale * gen.Normal(0, 1);
      return out;
    };
    const auto g = rows(gen.Int(2, 20));
    const auto r = rows(gen.Int(2, 20));
    const FRatioPattern p = ComputeFRatio(Fbank(g), Fbank(r));
    const auto ref = testing::FRatioOracle(g, r);
    for (int i = 0; i < m; ++i) {
      worst = std::max(worst, std::abs(p.values[i] - ref[i]));
      c.Near(p.values[i], ref[i], 1e-9, "trial " + std::to_string(trial));
    }
  }
  const double secs = Seconds(start);
  c.That(secs < 5.0, "runtime " + Fmt("%.2f s", secs));
  c.Note("max |dF| " + Fmt("%.2e", worst) + ", " + Fmt("%.2f s", secs));
}

void WarpCorrectness(Check& c) {
  c.Near(Warp(WarpKind::kMel, 700), 781.17, 0.01, "mel(700)");
  Gen gen(102);
  const double top = Warp(WarpKind::kMel, 8000);
  for (int i = 0; i < 1000; ++i) {
    const double f = gen.Uniform(0, 8000);
    c.That(Warp(WarpKind::kLinear, f) == f, "linear identity");
    c.Near(Warp(WarpKind::kInvertedMel, f) + Warp(WarpKind::kMel, 8000 - f), top,
           1e-9, "mirror at " + std::to_string(f));
  }
  c.Note("mel(700) " + Fmt("%.4f", Warp(WarpKind::kMel, 700)));
}

void PartitionOfUnity(Check& c) {
  int bins = 0;
  for (WarpKind kind :
       {WarpKind::kLinear, WarpKind::kMel, WarpKind::kInvertedMel})
    for (int m : {8, 23, 40}) {
      const FilterBank fb = BuildFilterBank(kind, m, 512, 16000, 0, 8000);
      const auto& e = fb.edges_warped;
      for (int k = 0; k < fb.weights.cols(); ++k) {
        const double w = Warp(kind, k * 16000.0 / 512);
        if (w < e[1] || w > e[m]) continue;
        ++bins;
        c.Near(fb.weights.col(k).sum(), 1.0, 1e-9,
               std::string(WarpName(kind)) + " M=" + std::to_string(m) +
                   " bin " + std::to_string(k));
      }
    }
  c.Note(std::to_string(bins) + " interior bins");
}

void DctOrthonormality(Check& c) {
  const std::vector<double> ones{1, 1, 1, 1};
  const auto y = DctII(ones, 4);
  const double want[4] = {2, 0, 0, 0};
  for (int k = 0; k < 4; ++k)
    c.Near(y[k], want[k], 1e-12, "[1,1,1,1] coefficient " + std::to_string(k));
  Gen gen(104);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.Int(1, 64);
    const auto x = gen.Normals(n, 0, 10);
    const auto back = InverseDctII(DctII(x, n));
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(back[i] - x[i]));
      c.Near(back[i], x[i], 1e-9, "round trip n=" + std::to_string(n));
    }
  }
  c.Note("max round-trip error " + Fmt("%.2e", worst));
}

void EmMonotonicity(Check& c) {
  Gen gen(105);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = gen.Int(1, 5), k = gen.Int(1, 4);
    const int n = gen.Int(10 * k, 200);
    const int clusters = gen.Int(1, 4);
    Matrix x(n, d);
    for (int t = 0; t < n; ++t) {
      const int cl = gen.Int(0, clusters - 1);
      for (int j = 0; j < d; ++j)
        x(t, j) = gen.Normal(3.0 * cl * (j + 1), gen.Uniform(0.2, 2));
    }
    TrainConfig config;
    config.max_iters = 40;
    config.ll_tolerance = 0;
    TrainTrace trace;
    TrainGmm(x, k, gen.Coin() ? CovarianceKind::kDiag : CovarianceKind::kFull,
             config, trial, &trace);
    for (size_t i = 1; i < trace.log_likelihood.size(); ++i)
      c.That(trace.log_likelihood[i] >= trace.log_likelihood[i - 1] - 1e-8,
             "trial " + std::to_string(trial) + " iteration " +
                 std::to_string(i));
  }
  // {0, 2} replicated to meet the frames-per-component minimum.
  Matrix x(10, 1);
  for (int i = 0; i < 10; ++i) x(i, 0) = (i % 2) * 2.0;
  const Gmm g = TrainGmm(x, 1, CovarianceKind::kDiag, {}, 0);
  c.Near(g.means()(0, 0), 1.0, 1e-9, "K=1 mean");
  c.Near(g.covariances()(0, 0), 1.0, 1e-9, "K=1 variance");
  c.Near(g.weights()[0], 1.0, 1e-9, "K=1 weight");
}

std::vector<ScoreRecord> Records(const std::vector<double>& genuine,
                                 const std::vector<double>& replay) {
  std::vector<ScoreRecord> out;
  for (size_t i = 0; i < genuine.size(); ++i)
    out.push_back({"g" + std::to_string(i), genuine[i], Label::kGenuine});
  for (size_t i = 0; i < replay.size(); ++i)
    out.push_back({"r" + std::to_string(i), replay[i], Label::kReplay});
  return out;
}

void EerOracleEquivalence(Check& c) {
  Gen gen(106);
  for (int trial = 0; trial < 500; ++trial) {
    const int ng = gen.Int(1, 30), nr = gen.Int(1, 30);
    std::vector<double> g, r;
    if (gen.Coin()) {
      g = gen.TiedScores(ng, gen.Int(1, 8));
      r = gen.TiedScores(nr, gen.Int(1, 8));
    } else {
      g = gen.Normals(ng, gen.Uniform(-1, 2));
      r = gen.Normals(nr);
    }
    c.Near(ComputeEer(Records(g, r)).eer, testing::EerOracle(g, r), 1e-9,
           "trial " + std::to_string(trial));
  }
  c.Near(ComputeEer(Records({2, 3, 4}, {-1, 0, 1})).eer, 0.0, 0, "separable");
  for (int trial = 0; trial < 50; ++trial) {
    auto s = gen.TiedScores(gen.Int(1, 20), gen.Int(1, 5));
    c.Near(ComputeEer(Records(s, s)).eer, 0.5, 1e-12, "identical multisets");
  }
}

std::map<std::string, std::string> TreeContents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

struct StudyRun {
  StudyReport report;
  double seconds = 0;
};

void DeviceDominates(Check& c, const StudyRun& run) {
  const auto& r = run.report;
  const double dev = r.Dispersion("linear", "device");
  const double spk = r.Dispersion("linear", "speaker");
  const double phr = r.Dispersion("linear", "phrase");
  c.That(dev > spk, "device <= speaker");
  c.That(dev > phr, "device <= phrase");
  c.Note("L-Fbank device " + Fmt("%.5f", dev) + ", speaker " +
         Fmt("%.5f", spk) + ", phrase " + Fmt("%.5f", phr));
}

void WarpOrdering(Check& c, const StudyRun& run) {
  const auto& r = run.report;
  const double im = r.Dispersion("imel", "device");
  const double lin = r.Dispersion("linear", "device");
  const double mel = r.Dispersion("mel", "device");
  c.That(im < lin, "IM-Fbank >= L-Fbank");
  c.That(lin < mel, "L-Fbank >= M-Fbank");
  c.Note("device dispersion IM " + Fmt("%.5f", im) + ", L " + Fmt("%.5f", lin) +
         ", M " + Fmt("%.5f", mel));
}

void EerTrend(Check& c, const StudyRun& run) {
  const auto& r = run.report;
  const double im = r.Eer("IMFCC", "full");
  const double lin = r.Eer("LFCC", "full");
  const double mel = r.Eer("MFCC", "full");
  c.That(im < lin, "EER IMFCC >= LFCC");
  c.That(lin < mel, "EER LFCC >= MFCC");
  c.That(run.seconds < 300, "study runtime " + Fmt("%.1f s", run.seconds));
  c.Note("full-cov EER IMFCC " + Fmt("%.2f%%", 100 * im) + ", LFCC " +
         Fmt("%.2f%%", 100 * lin) + ", MFCC " + Fmt("%.2f%%", 100 * mel) +
         ", study " + Fmt("%.1f s", run.seconds));
}

void Determinism(Check& c, const fs::path& first, const fs::path& second) {
  RunStudy(7, second);
  const auto a = TreeContents(first), b = TreeContents(second);
  c.That(a.size() == b.size(), "file counts differ");
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    c.That(it != b.end(), name + " missing from second run");
    if (it != b.end()) c.That(it->second == bytes, name + " differs");
  }
  int archives = 0;
  for (const auto& [name, bytes] : a) {
    if (fs::path(name).extension() != ".rpfa") continue;
    ++archives;
    const FeatureArchive decoded = DecodeArchive(bytes);
    c.That(EncodeArchive(decoded) == bytes, name + " re-encodes differently");
    // Values survive a second round trip unchanged.
    const FeatureArchive again = DecodeArchive(EncodeArchive(decoded));
    for (const auto& [id, feats] : decoded.entries) {
      const Matrix& x = feats.values;
      const Matrix& y = again.entries.at(id).values;
      c.That(x.rows() == y.rows() && x.cols() == y.cols() &&
                 std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0,
             name + ":" + id + " values differ");
    }
  }
  c.That(archives > 0, "no archives written");
  c.Note(std::to_string(a.size()) + " files identical, " +
         std::to_string(archives) + " archives round-tripped");
}

bool Report(int id, const char* title, const std::function<void(Check&)>& fn) {
  Check c;
  try {
    fn(c);
  } catch (const std::exception& e) {
    c.That(false, std::string("exception: ") + e.what());
  }
  std::printf("%s criterion %d: %s", c.ok() ? "PASS" : "FAIL", id, title);
  if (!c.ok()) std::printf(" [%s]", c.failure().c_str());
  if (!c.note().empty()) std::printf(" (%s)", c.note().c_str());
  std::printf("\n");
  std::fflush(stdout);
  return c.ok();
}

int Main() {
  bool ok = true;
  ok &= Report(1, "F-ratio matches high-precision oracle", FRatioOracleEquivalence);
  ok &= Report(2, "frequency warps", WarpCorrectness);
  ok &= Report(3, "filterbank partition of unity", PartitionOfUnity);
  ok &= Report(4, "DCT orthonormality", DctOrthonormality);
  ok &= Report(5, "EM monotonicity and K=1 closed form", EmMonotonicity);
  ok &= Report(6, "EER matches threshold-sweep oracle", EerOracleEquivalence);

  ScratchDir first("acceptance_study_a"), second("acceptance_study_b");
  StudyRun run;
  std::string study_error;
  try {
    const auto start = Clock::now();
    run.report = RunStudy(7, first.path());
    run.seconds = Seconds(start);
  } catch (const std::exception& e) {
    study_error = e.what();
  }
  auto with_study = [&](auto fn) {
    return [&, fn](Check& c) {
      if (!study_error.empty()) {
        c.That(false, "study failed: " + study_error);
        return;
      }
      fn(c, run);
    };
  };
  ok &= Report(7, "device dispersion dominates on L-Fbanks",
               with_study(DeviceDominates));
  ok &= Report(8, "device dispersion IM < L < M", with_study(WarpOrdering));
  ok &= Report(9, "held-out EER IMFCC < LFCC < MFCC (full covariance)",
               with_study(EerTrend));
  ok &= Report(10, "determinism and bit-exact archives",
               with_study([&](Check& c, const StudyRun&) {
                 Determinism(c, first.path(), second.path());
               }));
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace replaycm

int main() { return replaycm::Main(); }
