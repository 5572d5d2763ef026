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


#include "replaycm/replaycm.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "core/archive.hpp"
#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/fratio.hpp"
#include "core/gmm.hpp"
#include "core/pipeline.hpp"

struct rc_signal {
  replaycm::AudioSignal signal;
};

struct rc_manifest {
  replaycm::Manifest manifest;
  std::filesystem::path source_dir;
};

struct rc_archive {
  replaycm::FeatureArchive archive;
  // Float copies of the entries, in utt_id order, for rc_archive_entry.
  std::vector<std::string> ids;
  std::vector<std::vector<float>> values;
};

struct rc_probe_report {
  replaycm::ProbeReport report;
};

struct rc_model {
  replaycm::GmmPairModel model;
};

struct rc_scores {
  std::vector<replaycm::ScoreRecord> records;
  std::vector<bool> labeled;
};

namespace {

using replaycm::Error;
using replaycm::ErrorCode;

thread_local std::string g_last_error;

rc_status SetError(rc_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
rc_status Guard(F&& body) {
  try {
    body();
    return RC_OK;
  } catch (const Error& e) {
    return SetError(static_cast<rc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(RC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(RC_ERR_INTERNAL, e.what());
  }
}

void Require(bool ok, const char* what) {
  if (!ok) replaycm::Fail(ErrorCode::kInvalidArgument, what);
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) replaycm::Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) replaycm::Fail(ErrorCode::kIoError, "short write to " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) replaycm::Fail(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

replaycm::ExtractionConfig ToConfig(const rc_extract_options& o) {
  replaycm::ExtractionConfig c;
  switch (o.warp) {
    case RC_WARP_LINEAR: c.warp = replaycm::WarpKind::kLinear; break;
    case RC_WARP_MEL: c.warp = replaycm::WarpKind::kMel; break;
    case RC_WARP_INVERTED_MEL: c.warp = replaycm::WarpKind::kInvertedMel; break;
    default: Require(false, "unknown warp");
  }
  switch (o.feature) {
    case RC_FEATURE_FBANK: c.feature = replaycm::FeatureKind::kLogFbank; break;
    case RC_FEATURE_CEPSTRA: c.feature = replaycm::FeatureKind::kCepstra; break;
    case RC_FEATURE_CEPSTRA_DELTA:
      c.feature = replaycm::FeatureKind::kCepstraWithDeltas;
      break;
    default: Require(false, "unknown feature kind");
  }
  c.bands = o.bands;
  c.frame_len = o.frame_len;
  c.hop = o.hop;
  c.n_fft = o.n_fft;
  c.f_lo = o.f_lo;
  c.f_hi = o.f_hi;
  c.delta_window = o.delta_window;
  return c;
}

std::unique_ptr<rc_archive> WrapArchive(replaycm::FeatureArchive archive) {
  auto out = std::make_unique<rc_archive>();
  for (const auto& [id, feats] : archive.entries) {
    out->ids.push_back(id);
    std::vector<float> v(feats.values.size());
    for (Eigen::Index i = 0; i < feats.values.size(); ++i)
      v[i] = static_cast<float>(feats.values.data()[i]);
    out->values.push_back(std::move(v));
  }
  out->archive = std::move(archive);
  return out;
}

}  // namespace

extern "C" {

const char* rc_status_name(rc_status status) {
  if (status == RC_ERR_INTERNAL) return "Internal";
  return replaycm::ErrorCodeName(static_cast<ErrorCode>(status));
}

const char* rc_last_error(void) { return g_last_error.c_str(); }

const char* rc_version(void) { return "0.1.0"; }

// ---- audio

rc_status rc_signal_read_wav(const char* path, rc_signal** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    auto s = std::make_unique<rc_signal>();
    s->signal = replaycm::ReadWav(path);
    *out = s.release();
  });
}

rc_status rc_signal_write_wav(const rc_signal* signal, const char* path) {
  return Guard([&] {
    Require(signal && path, "null argument");
    replaycm::WriteWav(signal->signal, path);
  });
}

rc_status rc_signal_create(const double* samples, size_t n, int sample_rate,
                           rc_signal** out) {
  return Guard([&] {
    Require(out && (samples || n == 0), "null argument");
    if (sample_rate != replaycm::kSampleRate)
      replaycm::Fail(ErrorCode::kWrongSampleRate,
                     std::to_string(sample_rate) + " Hz, expected 16000 Hz");
    auto s = std::make_unique<rc_signal>();
    s->signal.sample_rate = sample_rate;
    s->signal.samples.assign(samples, samples + n);
    for (double v : s->signal.samples)
      if (!(v >= -1.0 && v < 1.0))
        replaycm::Fail(ErrorCode::kOutOfRange, "sample outside [-1, 1)");
    *out = s.release();
  });
}

size_t rc_signal_length(const rc_signal* signal) {
  return signal ? signal->signal.samples.size() : 0;
}

int rc_signal_sample_rate(const rc_signal* signal) {
  return signal ? signal->signal.sample_rate : 0;
}

const double* rc_signal_samples(const rc_signal* signal) {
  return signal ? signal->signal.samples.data() : nullptr;
}

void rc_signal_free(rc_signal* signal) { delete signal; }

// ---- manifests

rc_status rc_manifest_read(const char* path, rc_manifest** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    auto m = std::make_unique<rc_manifest>();
    m->manifest = replaycm::ParseManifest(path);
    m->source_dir = std::filesystem::path(path).parent_path();
    *out = m.release();
  });
}

rc_status rc_manifest_write(const rc_manifest* manifest, const char* path) {
  return Guard([&] {
    Require(manifest && path, "null argument");
    replaycm::WriteManifest(manifest->manifest, path);
  });
}

size_t rc_manifest_size(const rc_manifest* manifest) {
  return manifest ? manifest->manifest.records.size() : 0;
}

rc_status rc_manifest_get(const rc_manifest* manifest, size_t index,
                          rc_utterance* out) {
  return Guard([&] {
    Require(manifest && out, "null argument");
    if (index >= manifest->manifest.records.size())
      replaycm::Fail(ErrorCode::kOutOfRange, "manifest index out of range");
    const auto& r = manifest->manifest.records[index];
    out->utt_id = r.utt_id.c_str();
    out->audio_path = r.audio_path.c_str();
    out->label = r.label == replaycm::Label::kGenuine ? RC_LABEL_GENUINE
                                                      : RC_LABEL_REPLAY;
    out->speaker_id = r.speaker_id.c_str();
    out->phrase_id = r.phrase_id.c_str();
    out->device_id = r.device_id.c_str();
  });
}

void rc_manifest_free(rc_manifest* manifest) { delete manifest; }

// ---- synthetic corpus

void rc_synth_options_init(rc_synth_options* options) {
  if (!options) return;
  const replaycm::SynthConfig d;
  options->n_speakers = d.n_speakers;
  options->n_phrases = d.n_phrases;
  options->n_train_devices = d.n_train_devices;
  options->n_heldout_devices = d.n_heldout_devices;
  options->utt_seconds = d.utt_seconds;
  options->reps = d.reps;
}

rc_status rc_synth_corpus(const rc_synth_options* options, uint64_t seed,
                          const char* out_dir) {
  return Guard([&] {
    Require(options && out_dir, "null argument");
    replaycm::SynthConfig c;
    c.n_speakers = options->n_speakers;
    c.n_phrases = options->n_phrases;
    c.n_train_devices = options->n_train_devices;
    c.n_heldout_devices = options->n_heldout_devices;
    c.utt_seconds = options->utt_seconds;
    c.reps = options->reps;
    const replaycm::SynthCorpus corpus = replaycm::SynthesizeCorpus(c, seed);
    replaycm::WriteCorpus(corpus, out_dir);
    if (c.reps >= 2) {
      const auto split = replaycm::SplitByDevice(corpus.manifest, c.reps);
      const std::filesystem::path dir(out_dir);
      if (!split.train.records.empty())
        replaycm::WriteManifest(split.train, dir / "manifest_train.tsv");
      if (!split.heldout.records.empty())
        replaycm::WriteManifest(split.heldout, dir / "manifest_heldout.tsv");
    }
  });
}

// ---- features

void rc_extract_options_init(rc_extract_options* options) {
  if (!options) return;
  const replaycm::ExtractionConfig d;
  options->warp = RC_WARP_LINEAR;
  options->feature = RC_FEATURE_FBANK;
  options->bands = d.bands;
  options->frame_len = d.frame_len;
  options->hop = d.hop;
  options->n_fft = d.n_fft;
  options->f_lo = d.f_lo;
  options->f_hi = d.f_hi;
  options->delta_window = d.delta_window;
}

rc_status rc_extract(const rc_manifest* manifest, const char* base_dir,
                     const rc_extract_options* options, rc_archive** out) {
  return Guard([&] {
    Require(manifest && options && out, "null argument");
    const std::filesystem::path base =
        base_dir ? std::filesystem::path(base_dir) : manifest->source_dir;
    auto archive = WrapArchive(
        replaycm::ExtractArchive(manifest->manifest, base, ToConfig(*options)));
    *out = archive.release();
  });
}

rc_status rc_extract_signal(const rc_signal* signal,
                            const rc_extract_options* options,
                            size_t* n_frames, size_t* dim, double* values,
                            size_t capacity) {
  return Guard([&] {
    Require(signal && options && n_frames && dim, "null argument");
    const replaycm::ExtractionConfig config = ToConfig(*options);
    const replaycm::FeatureMatrix feats = replaycm::ExtractFeatures(
        signal->signal, config, replaycm::BuildFilterBank(config));
    *n_frames = static_cast<size_t>(feats.num_frames());
    *dim = static_cast<size_t>(feats.dim());
    if (values == nullptr) return;
    if (capacity < static_cast<size_t>(feats.values.size()))
      replaycm::Fail(ErrorCode::kInvalidArgument, "output buffer too small");
    std::copy(feats.values.data(), feats.values.data() + feats.values.size(),
              values);
  });
}

rc_status rc_archive_read(const char* path, rc_archive** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = WrapArchive(replaycm::ReadArchive(path)).release();
  });
}

rc_status rc_archive_write(const rc_archive* archive, const char* path) {
  return Guard([&] {
    Require(archive && path, "null argument");
    replaycm::WriteArchive(archive->archive, path);
  });
}

size_t rc_archive_size(const rc_archive* archive) {
  return archive ? archive->ids.size() : 0;
}

int rc_archive_dim(const rc_archive* archive) {
  return archive ? replaycm::FeatureDim(archive->archive.config) : 0;
}

rc_status rc_archive_entry(const rc_archive* archive, size_t index,
                           const char** utt_id, size_t* n_frames,
                           const float** values) {
  return Guard([&] {
    Require(archive != nullptr, "null archive");
    if (index >= archive->ids.size())
      replaycm::Fail(ErrorCode::kOutOfRange, "archive index out of range");
    if (utt_id) *utt_id = archive->ids[index].c_str();
    if (n_frames)
      *n_frames = static_cast<size_t>(
          archive->archive.entries.at(archive->ids[index]).num_frames());
    if (values) *values = archive->values[index].data();
  });
}

void rc_archive_free(rc_archive* archive) { delete archive; }

// ---- probing

rc_status rc_probe(const rc_archive* archive, const rc_manifest* manifest,
                   const char* factor, rc_probe_report** out) {
  return Guard([&] {
    Require(archive && manifest && factor && out, "null argument");
    auto r = std::make_unique<rc_probe_report>();
    r->report = replaycm::ProbeFactor(archive->archive.entries,
                                      manifest->manifest,
                                      replaycm::ParseFactor(factor),
                                      archive->archive.config.warp);
    *out = r.release();
  });
}

rc_status rc_probe_datasets(const rc_archive* archive,
                            const rc_manifest* first, const char* first_name,
                            const rc_manifest* second, const char* second_name,
                            rc_probe_report** out) {
  return Guard([&] {
    Require(archive && first && first_name && second && second_name && out,
            "null argument");
    auto r = std::make_unique<rc_probe_report>();
    r->report = replaycm::ProbeDatasets(
        archive->archive.entries,
        {{first_name, first->manifest}, {second_name, second->manifest}},
        archive->archive.config.warp);
    *out = r.release();
  });
}

double rc_probe_dispersion(const rc_probe_report* report) {
  return report ? report->report.dispersion : 0.0;
}

size_t rc_probe_num_patterns(const rc_probe_report* report) {
  return report ? report->report.patterns.size() : 0;
}

rc_status rc_probe_pattern(const rc_probe_report* report, size_t index,
                           const char** value, size_t* bands,
                           const double** fratio) {
  return Guard([&] {
    Require(report != nullptr, "null report");
    if (index >= report->report.patterns.size())
      replaycm::Fail(ErrorCode::kOutOfRange, "pattern index out of range");
    const auto& p = report->report.patterns[index];
    if (value) *value = p.condition ? p.condition->second.c_str() : "-";
    if (bands) *bands = p.values.size();
    if (fratio) *fratio = p.values.data();
  });
}

rc_status rc_probe_write_tsv(const rc_probe_report* report, const char* path) {
  return Guard([&] {
    Require(report && path, "null argument");
    WriteFile(path, replaycm::ProbeReportToTsv(report->report));
  });
}

rc_status rc_probe_write_json(const rc_probe_report* report,
                              const char* path) {
  return Guard([&] {
    Require(report && path, "null argument");
    WriteFile(path, replaycm::ProbeReportToJson(report->report).dump(2) + "\n");
  });
}

void rc_probe_free(rc_probe_report* report) { delete report; }

// ---- GMM detector

void rc_train_options_init(rc_train_options* options) {
  if (!options) return;
  const replaycm::PairTrainOptions d;
  options->n_comp = d.n_comp;
  options->covariance = RC_COV_DIAG;
  options->max_iters = d.train.max_iters;
  options->ll_tolerance = d.train.ll_tolerance;
  options->variance_floor_factor = d.train.variance_floor_factor;
  options->seed = d.seed;
}

rc_status rc_train(const rc_archive* archive, const rc_manifest* manifest,
                   const rc_train_options* options, rc_model** out) {
  return Guard([&] {
    Require(archive && manifest && options && out, "null argument");
    replaycm::PairTrainOptions o;
    o.n_comp = options->n_comp;
    o.covariance = options->covariance == RC_COV_FULL
                       ? replaycm::CovarianceKind::kFull
                       : replaycm::CovarianceKind::kDiag;
    o.train.max_iters = options->max_iters;
    o.train.ll_tolerance = options->ll_tolerance;
    o.train.variance_floor_factor = options->variance_floor_factor;
    o.seed = options->seed;
    auto m = std::make_unique<rc_model>(rc_model{
        replaycm::TrainPair(archive->archive, manifest->manifest, o)});
    *out = m.release();
  });
}

rc_status rc_model_read(const char* path, rc_model** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(ReadFile(path));
    } catch (const nlohmann::json::parse_error& e) {
      replaycm::Fail(ErrorCode::kUnsupportedFormat,
                     std::string("model JSON: ") + e.what());
    }
    *out = new rc_model{replaycm::ModelFromJson(doc)};
  });
}

rc_status rc_model_write(const rc_model* model, const char* path) {
  return Guard([&] {
    Require(model && path, "null argument");
    WriteFile(path, replaycm::ModelToJson(model->model).dump(1) + "\n");
  });
}

int rc_model_dim(const rc_model* model) {
  return model ? model->model.genuine.dim() : 0;
}

void rc_model_free(rc_model* model) { delete model; }

rc_status rc_model_score_frames(const rc_model* model, const double* frames,
                                size_t n_frames, size_t dim, double* score) {
  return Guard([&] {
    Require(model && score && (frames || n_frames == 0), "null argument");
    replaycm::Matrix m(static_cast<Eigen::Index>(n_frames),
                       static_cast<Eigen::Index>(dim));
    std::copy(frames, frames + n_frames * dim, m.data());
    *score = replaycm::ScoreUtterance(model->model, m);
  });
}

// ---- scores

rc_status rc_score(const rc_model* model, const rc_archive* archive,
                   const rc_manifest* manifest, rc_scores** out) {
  return Guard([&] {
    Require(model && archive && out, "null argument");
    auto s = std::make_unique<rc_scores>();
    s->records = replaycm::ScoreArchive(model->model, archive->archive,
                                        manifest ? &manifest->manifest : nullptr);
    for (const auto& r : s->records)
      s->labeled.push_back(manifest &&
                           manifest->manifest.Find(r.utt_id) != nullptr);
    *out = s.release();
  });
}

rc_status rc_scores_read(const char* path, rc_scores** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    auto s = std::make_unique<rc_scores>();
    s->records = replaycm::ParseScores(ReadFile(path), &s->labeled);
    *out = s.release();
  });
}

rc_status rc_scores_write(const rc_scores* scores, const char* path) {
  return Guard([&] {
    Require(scores && path, "null argument");
    const std::string text =
        replaycm::FormatScores(scores->records, &scores->labeled);
    WriteFile(path, text);
  });
}

size_t rc_scores_size(const rc_scores* scores) {
  return scores ? scores->records.size() : 0;
}

rc_status rc_scores_get(const rc_scores* scores, size_t index,
                        const char** utt_id, double* score) {
  return Guard([&] {
    Require(scores != nullptr, "null scores");
    if (index >= scores->records.size())
      replaycm::Fail(ErrorCode::kOutOfRange, "score index out of range");
    if (utt_id) *utt_id = scores->records[index].utt_id.c_str();
    if (score) *score = scores->records[index].score;
  });
}

void rc_scores_free(rc_scores* scores) { delete scores; }

rc_status rc_eer(const rc_scores* scores, const rc_manifest* manifest,
                 double* eer, double* threshold) {
  return Guard([&] {
    Require(scores && manifest && eer, "null argument");
    const replaycm::EerResult r =
        replaycm::EvaluateScores(scores->records, manifest->manifest);
    *eer = r.eer;
    if (threshold) *threshold = r.threshold;
  });
}

// ---- study

rc_status rc_run_study(uint64_t seed, const char* out_dir,
                       rc_study_summary* summary) {
  return Guard([&] {
    Require(out_dir != nullptr, "null argument");
    const replaycm::StudyReport report = replaycm::RunStudy(seed, out_dir);
    if (!summary) return;
    const char* fbanks[] = {"linear", "mel", "imel"};
    const char* factors[] = {"speaker", "phrase", "device", "dataset"};
    const char* features[] = {"LFCC", "MFCC", "IMFCC"};
    const char* covs[] = {"diag", "full"};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j)
        summary->dispersion[i][j] = report.Dispersion(fbanks[i], factors[j]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        summary->eer[i][j] = report.Eer(features[i], covs[j]);
  });
}

}  // extern "C"
