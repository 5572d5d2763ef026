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


#include "core/pipeline.hpp"

#include <fstream>
#include <map>

#include "core/error.hpp"
#include "core/format.hpp"

namespace replaycm {

namespace {

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

Matrix StackFrames(const FeatureArchive& archive, const Manifest& manifest,
                   Label label) {
  std::vector<const Matrix*> parts;
  Eigen::Index rows = 0;
  for (const auto& r : manifest.records) {
    if (r.label != label) continue;
    auto it = archive.entries.find(r.utt_id);
    if (it == archive.entries.end())
      Fail(ErrorCode::kNotFound, "archive has no entry for '" + r.utt_id + "'");
    parts.push_back(&it->second.values);
    rows += it->second.values.rows();
  }
  const int dim = FeatureDim(archive.config);
  Matrix out(rows, dim);
  Eigen::Index at = 0;
  for (const Matrix* m : parts) {
    out.middleRows(at, m->rows()) = *m;
    at += m->rows();
  }
  return out;
}

nlohmann::json TrainConfigToJson(const PairTrainOptions& o) {
  return {{"n_comp", o.n_comp},
          {"covariance_kind", CovarianceKindName(o.covariance)},
          {"max_iters", o.train.max_iters},
          {"ll_tolerance", o.train.ll_tolerance},
          {"variance_floor_factor", o.train.variance_floor_factor},
          {"kmeans_iters", o.train.kmeans_iters},
          {"seed", o.seed}};
}

const char* CepstralName(WarpKind kind) {
  switch (kind) {
    case WarpKind::kLinear: return "LFCC";
    case WarpKind::kMel: return "MFCC";
    case WarpKind::kInvertedMel: return "IMFCC";
  }
  return "?";
}

}  // namespace

FeatureArchive ExtractArchive(const Manifest& manifest,
                              const std::filesystem::path& base_dir,
                              const ExtractionConfig& config) {
  const FilterBank fb = BuildFilterBank(config);
  FeatureArchive archive;
  archive.config = config;
  for (const auto& r : manifest.records) {
    std::filesystem::path audio(r.audio_path);
    if (audio.is_relative()) audio = base_dir / audio;
    archive.entries.emplace(r.utt_id,
                            ExtractFeatures(ReadWav(audio), config, fb));
  }
  return archive;
}

FeatureArchive ExtractArchive(const std::vector<AudioSignal>& signals,
                              const Manifest& manifest,
                              const ExtractionConfig& config) {
  if (signals.size() != manifest.records.size())
    Fail(ErrorCode::kInvalidArgument, "signals and manifest differ in length");
  const FilterBank fb = BuildFilterBank(config);
  FeatureArchive archive;
  archive.config = config;
  for (size_t i = 0; i < signals.size(); ++i)
    archive.entries.emplace(manifest.records[i].utt_id,
                            ExtractFeatures(signals[i], config, fb));
  return archive;
}

GmmPairModel TrainPair(const FeatureArchive& archive, const Manifest& manifest,
                       const PairTrainOptions& options) {
  if (manifest.CountLabel(Label::kGenuine) == 0 ||
      manifest.CountLabel(Label::kReplay) == 0)
    Fail(ErrorCode::kOneClassOnly,
         "training needs both genuine and replay utterances");
  const Matrix genuine = StackFrames(archive, manifest, Label::kGenuine);
  const Matrix replay = StackFrames(archive, manifest, Label::kReplay);
  TrainTrace g_trace, r_trace;
  Gmm g = TrainGmm(genuine, options.n_comp, options.covariance, options.train,
                   DeriveSeed(options.seed, 1), &g_trace);
  Gmm r = TrainGmm(replay, options.n_comp, options.covariance, options.train,
                   DeriveSeed(options.seed, 2), &r_trace);
  nlohmann::json config = TrainConfigToJson(options);
  config["extraction"] = ExtractionConfigToJson(archive.config);
  config["genuine_frames"] = genuine.rows();
  config["replay_frames"] = replay.rows();
  config["genuine_em_iterations"] = g_trace.iterations;
  config["replay_em_iterations"] = r_trace.iterations;
  return GmmPairModel{std::move(g), std::move(r), FeatureTag(archive.config),
                      std::move(config)};
}

std::vector<ScoreRecord> ScoreArchive(const GmmPairModel& model,
                                      const FeatureArchive& archive,
                                      const Manifest* manifest) {
  std::vector<ScoreRecord> out;
  for (const auto& [id, feats] : archive.entries) {
    ScoreRecord rec;
    rec.utt_id = id;
    try {
      rec.score = ScoreUtterance(model, feats);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " ('" + id + "')");
    }
    if (manifest) {
      if (const UtteranceMeta* m = manifest->Find(id)) rec.label = m->label;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

EerResult EvaluateScores(const std::vector<ScoreRecord>& scores,
                         const Manifest& manifest) {
  std::map<std::string_view, Label> labels;
  for (const auto& r : manifest.records) labels.emplace(r.utt_id, r.label);
  std::vector<ScoreRecord> labelled;
  for (const auto& s : scores) {
    auto it = labels.find(s.utt_id);
    if (it == labels.end())
      Fail(ErrorCode::kNotFound,
           "scored utterance '" + s.utt_id + "' is not in the manifest");
    labelled.push_back({s.utt_id, s.score, it->second});
  }
  return ComputeEer(labelled);
}

CorpusSplit SplitByDevice(const Manifest& manifest, int reps) {
  if (reps < 2)
    Fail(ErrorCode::kInvalidConfig,
         "a device-disjoint split needs at least 2 repetitions");
  const int train_reps = (reps + 1) / 2;
  CorpusSplit split;
  for (const auto& r : manifest.records) {
    const int rep = SynthRepIndex(r.utt_id);
    if (rep < 0)
      Fail(ErrorCode::kInvalidArgument,
           "'" + r.utt_id + "' is not a synthetic utterance id");
    const bool train_rep = rep < train_reps;
    if (r.label == Label::kGenuine) {
      (train_rep ? split.train : split.heldout).records.push_back(r);
    } else if (train_rep && r.device_id.starts_with('D')) {
      split.train.records.push_back(r);
    } else if (!train_rep && r.device_id.starts_with('H')) {
      split.heldout.records.push_back(r);
    }
  }
  return split;
}

double StudyReport::Dispersion(const std::string& fbank,
                               const std::string& factor) const {
  return doc.at("probes").at(fbank).at(factor).at("dispersion").get<double>();
}

double StudyReport::Eer(const std::string& feature,
                        const std::string& cov) const {
  return doc.at("eer").at(feature).at(cov).at("eer").get<double>();
}

StudyReport RunStudy(uint64_t seed, const std::filesystem::path& out_dir,
                     const StudyOptions& options) {
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const char* sub : {"probes", "features", "models", "scores"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) Fail(ErrorCode::kIoError, "cannot create " + (out_dir / sub).string());
  }

  // (1) corpus
  const SynthCorpus corpus = SynthesizeCorpus(options.corpus, seed);
  if (options.write_audio) WriteCorpus(corpus, out_dir / "corpus");
  const CorpusSplit split = SplitByDevice(corpus.manifest, options.corpus.reps);
  WriteManifest(split.train, out_dir / "manifest_train.tsv");
  WriteManifest(split.heldout, out_dir / "manifest_heldout.tsv");

  nlohmann::json report;
  report["seed"] = seed;
  report["corpus"] = {{"n_speakers", options.corpus.n_speakers},
                      {"n_phrases", options.corpus.n_phrases},
                      {"n_train_devices", options.corpus.n_train_devices},
                      {"n_heldout_devices", options.corpus.n_heldout_devices},
                      {"utt_seconds", options.corpus.utt_seconds},
                      {"reps", options.corpus.reps},
                      {"genuine", corpus.manifest.CountLabel(Label::kGenuine)},
                      {"replay", corpus.manifest.CountLabel(Label::kReplay)}};
  report["devices"] = DeviceProfilesToJson(corpus.devices);

  const WarpKind warps[] = {WarpKind::kLinear, WarpKind::kMel,
                            WarpKind::kInvertedMel};
  for (WarpKind warp : warps) {
    ExtractionConfig fbank_cfg;
    fbank_cfg.warp = warp;
    fbank_cfg.feature = FeatureKind::kLogFbank;
    fbank_cfg.bands = options.bands;

    // (2) features
    const FeatureArchive fbank =
        ExtractArchive(corpus.signals, corpus.manifest, fbank_cfg);
    WriteArchive(fbank, out_dir / "features" /
                            (std::string(WarpName(warp)) + "_fbank.rpfa"));

    // (3) probes
    nlohmann::json probes;
    for (Factor factor : {Factor::kSpeaker, Factor::kPhrase, Factor::kDevice,
                          Factor::kDataset}) {
      const ProbeReport probe =
          factor == Factor::kDataset
              ? ProbeDatasets(fbank.entries,
                              {{"train", split.train},
                               {"heldout", split.heldout}},
                              warp)
              : ProbeFactor(fbank.entries, corpus.manifest, factor, warp);
      const std::string stem =
          std::string(WarpName(warp)) + "_" + FactorName(factor);
      WriteText(out_dir / "probes" / (stem + ".tsv"), ProbeReportToTsv(probe));
      const nlohmann::json probe_json = ProbeReportToJson(probe);
      WriteText(out_dir / "probes" / (stem + ".json"), probe_json.dump(2) + "\n");
      probes[FactorName(factor)] = {{"dispersion", probe.dispersion},
                                    {"tsv", "probes/" + stem + ".tsv"}};
    }
    report["probes"][WarpName(warp)] = probes;

    // (4)-(5) cepstral systems
    ExtractionConfig cep_cfg = fbank_cfg;
    cep_cfg.feature = FeatureKind::kCepstraWithDeltas;
    FeatureArchive cep;
    cep.config = cep_cfg;
    for (const auto& [id, logfb] : fbank.entries)
      cep.entries.emplace(
          id, AppendDeltas(CepstralFeatures(logfb), cep_cfg.delta_window));
    const std::string feature = CepstralName(warp);
    WriteArchive(cep, out_dir / "features" / (feature + "_delta.rpfa"));

    FeatureArchive heldout;
    heldout.config = cep_cfg;
    for (const auto& r : split.heldout.records)
      heldout.entries.emplace(r.utt_id, cep.entries.at(r.utt_id));

    for (CovarianceKind cov : {CovarianceKind::kDiag, CovarianceKind::kFull}) {
      PairTrainOptions train;
      train.n_comp = options.n_comp;
      train.covariance = cov;
      train.train = options.train;
      train.seed = DeriveSeed(seed, 100 + static_cast<int>(warp) * 2 +
                                        static_cast<int>(cov));
      const GmmPairModel model = TrainPair(cep, split.train, train);
      const std::string stem = feature + "_" + CovarianceKindName(cov);
      WriteText(out_dir / "models" / (stem + ".json"),
                ModelToJson(model).dump(1) + "\n");
      const std::vector<ScoreRecord> scores =
          ScoreArchive(model, heldout, &split.heldout);
      WriteText(out_dir / "scores" / (stem + ".tsv"), FormatScores(scores));
      const EerResult eer = ComputeEer(scores);
      report["eer"][feature][CovarianceKindName(cov)] = {
          {"eer", eer.eer}, {"threshold", eer.threshold}};
    }
  }

  std::string table = "system\tLFCC\tMFCC\tIMFCC\n";
  for (const char* cov : {"diag", "full"}) {
    table += std::string("GMM(") + (cov[0] == 'd' ? "Diag" : "Full") + ")";
    for (const char* f : {"LFCC", "MFCC", "IMFCC"}) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "\t%.2f",
                    100.0 * report["eer"][f][cov]["eer"].get<double>());
      table += buf;
    }
    table += '\n';
  }
  WriteText(out_dir / "eer_table.tsv", table);
  report["training"] = {{"n_comp", options.n_comp},
                        {"max_iters", options.train.max_iters},
                        {"ll_tolerance", options.train.ll_tolerance},
                        {"variance_floor_factor",
                         options.train.variance_floor_factor}};
  WriteText(out_dir / "study_report.json", report.dump(2) + "\n");
  return StudyReport{std::move(report)};
}

}  // namespace replaycm
