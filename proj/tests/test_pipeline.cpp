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


#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "core/pipeline.hpp"
#include "support/expect.hpp"
#include "support/gen.hpp"

namespace replaycm {
namespace {

using testing::ScratchDir;

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> TreeContents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[fs::relative(e.path(), root).string()] = Slurp(e.path());
  return out;
}

TEST(Split, DeviceDisjointByRepetition) {
  const SynthCorpus c = SynthesizeCorpus({2, 2, 2, 2, 0.5, 3}, 1);
  const CorpusSplit s = SplitByDevice(c.manifest, 3);
  std::set<std::string> train_dev, held_dev;
  for (const auto& r : s.train.records) {
    EXPECT_LT(SynthRepIndex(r.utt_id), 2);
    if (r.label == Label::kReplay) train_dev.insert(r.device_id);
  }
  for (const auto& r : s.heldout.records) {
    EXPECT_EQ(SynthRepIndex(r.utt_id), 2);
    if (r.label == Label::kReplay) held_dev.insert(r.device_id);
  }
  EXPECT_EQ(train_dev, (std::set<std::string>{"D00", "D01"}));
  EXPECT_EQ(held_dev, (std::set<std::string>{"H00", "H01"}));
  EXPECT_EQ(s.train.CountLabel(Label::kGenuine), 8u);
  EXPECT_EQ(s.train.CountLabel(Label::kReplay), 16u);
  EXPECT_EQ(s.heldout.CountLabel(Label::kGenuine), 4u);
  EXPECT_EQ(s.heldout.CountLabel(Label::kReplay), 8u);
  EXPECT_ERROR_CODE(SplitByDevice(c.manifest, 1), ErrorCode::kInvalidConfig);
}

TEST(Pipeline, DiskAndMemoryExtractionAgree) {
  ScratchDir dir("extract");
  const SynthCorpus c = SynthesizeCorpus({1, 2, 1, 0, 0.5, 1}, 4);
  WriteCorpus(c, dir.path());
  std::vector<AudioSignal> decoded;
  for (const auto& r : c.manifest.records)
    decoded.push_back(ReadWav(dir.path() / r.audio_path));
  ExtractionConfig cfg;
  cfg.warp = WarpKind::kMel;
  cfg.feature = FeatureKind::kCepstra;
  const FeatureArchive disk = ExtractArchive(c.manifest, dir.path(), cfg);
  const FeatureArchive mem = ExtractArchive(decoded, c.manifest, cfg);
  ASSERT_EQ(disk.entries.size(), 4u);
  for (const auto& [id, f] : mem.entries) {
    EXPECT_EQ(disk.entries.at(id).values, f.values);
    EXPECT_EQ(f.dim(), 13);
    EXPECT_EQ(f.num_frames(), 48);
  }
  Manifest missing = c.manifest;
  missing.records[0].audio_path = "wav/nope.wav";
  EXPECT_ERROR_CODE(ExtractArchive(missing, dir.path(), cfg), ErrorCode::kNotFound);
}

TEST(Pipeline, TrainScoreEvaluate) {
  const SynthCorpus c = SynthesizeCorpus({2, 2, 1, 1, 0.5, 2}, 6);
  const CorpusSplit s = SplitByDevice(c.manifest, 2);
  ExtractionConfig cfg;
  cfg.warp = WarpKind::kInvertedMel;
  cfg.feature = FeatureKind::kCepstraWithDeltas;
  const FeatureArchive archive = ExtractArchive(c.signals, c.manifest, cfg);
  PairTrainOptions opt;
  opt.n_comp = 2;
  opt.covariance = CovarianceKind::kFull;
  opt.train.max_iters = 10;
  opt.seed = 3;
  const GmmPairModel model = TrainPair(archive, s.train, opt);
  EXPECT_EQ(model.feature_kind, "IMFCC+Δ");
  EXPECT_EQ(model.genuine.dim(), 26);
  EXPECT_EQ(model.training_config.at("n_comp"), 2);
  EXPECT_EQ(model.training_config.at("covariance_kind"), "full");

  const auto scores = ScoreArchive(model, archive, &s.heldout);
  ASSERT_EQ(scores.size(), archive.entries.size());
  for (size_t i = 1; i < scores.size(); ++i)
    EXPECT_LT(scores[i - 1].utt_id, scores[i].utt_id);
  for (const auto& r : scores) {
    const UtteranceMeta* meta = c.manifest.Find(r.utt_id);
    if (s.heldout.Find(r.utt_id)) EXPECT_EQ(r.label, meta->label);
    EXPECT_TRUE(std::isfinite(r.score));
  }
  EXPECT_ERROR_CODE(EvaluateScores(scores, s.heldout), ErrorCode::kNotFound);
  FeatureArchive heldout{archive.config, {}};
  for (const auto& r : s.heldout.records)
    heldout.entries[r.utt_id] = archive.entries.at(r.utt_id);
  const EerResult eer = EvaluateScores(ScoreArchive(model, heldout), s.heldout);
  EXPECT_GE(eer.eer, 0.0);
  EXPECT_LE(eer.eer, 1.0);

  const GmmPairModel again = TrainPair(archive, s.train, opt);
  EXPECT_EQ(again.genuine.means(), model.genuine.means());
}

TEST(Pipeline, TrainingNeedsBothClasses) {
  const SynthCorpus c = SynthesizeCorpus({1, 1, 1, 0, 0.5, 1}, 6);
  const FeatureArchive archive =
      ExtractArchive(c.signals, c.manifest, ExtractionConfig{});
  Manifest genuine_only;
  genuine_only.records.push_back(c.manifest.records[0]);
  PairTrainOptions opt;
  opt.n_comp = 1;
  EXPECT_ERROR_CODE(TrainPair(archive, genuine_only, opt), ErrorCode::kOneClassOnly);
}

StudyOptions TinyStudy() {
  StudyOptions o;
  o.corpus = {2, 2, 1, 1, 0.5, 2};
  o.n_comp = 2;
  o.train.max_iters = 5;
  return o;
}

TEST(Study, ReportShapeAndFiles) {
  ScratchDir dir("study");
  const StudyReport r = RunStudy(3, dir.path(), TinyStudy());
  const auto& doc = r.doc;
  EXPECT_EQ(doc.at("probes").size(), 3u);
  for (const char* warp : {"linear", "mel", "imel"}) {
    EXPECT_EQ(doc.at("probes").at(warp).size(), 4u);
    for (const char* f : {"speaker", "phrase", "device", "dataset"}) {
      EXPECT_TRUE(fs::exists(dir.path() / "probes" /
                             (std::string(warp) + "_" + f + ".tsv")));
      EXPECT_GE(r.Dispersion(warp, f), 0.0);
    }
    EXPECT_TRUE(fs::exists(dir.path() / "features" /
                           (std::string(warp) + "_fbank.rpfa")));
  }
  EXPECT_EQ(doc.at("eer").size(), 3u);
  for (const char* feat : {"LFCC", "MFCC", "IMFCC"})
    for (const char* cov : {"diag", "full"}) {
      EXPECT_GE(r.Eer(feat, cov), 0.0);
      EXPECT_TRUE(fs::exists(dir.path() / "models" /
                             (std::string(feat) + "_" + cov + ".json")));
      EXPECT_TRUE(fs::exists(dir.path() / "scores" /
                             (std::string(feat) + "_" + cov + ".tsv")));
    }
  for (const char* f : {"study_report.json", "eer_table.tsv", "manifest_train.tsv",
                        "manifest_heldout.tsv", "corpus/manifest.tsv",
                        "corpus/devices.json"})
    EXPECT_TRUE(fs::exists(dir.path() / f)) << f;
  const auto parsed = nlohmann::json::parse(Slurp(dir.path() / "study_report.json"));
  EXPECT_EQ(parsed, doc);
}

TEST(Study, SameSeedGivesIdenticalTree) {
  ScratchDir a("study_a"), b("study_b");
  RunStudy(5, a.path(), TinyStudy());
  RunStudy(5, b.path(), TinyStudy());
  const auto ta = TreeContents(a.path()), tb = TreeContents(b.path());
  ASSERT_EQ(ta.size(), tb.size());
  for (const auto& [name, bytes] : ta) {
    ASSERT_TRUE(tb.count(name)) << name;
    EXPECT_TRUE(tb.at(name) == bytes) << name;
  }
}

}  // namespace
}  // namespace replaycm
