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


// replaycm command-line front end. Every subcommand goes through the C API.

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "replaycm/replaycm.h"

namespace {

// Thrown to unwind to main with a one-line diagnostic.
struct CommandError {
  std::string message;
};

void Check(rc_status status, const std::string& context) {
  if (status != RC_OK)
    throw CommandError{context + ": " + rc_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Manifest = Handle<rc_manifest, rc_manifest_free>;
using Archive = Handle<rc_archive, rc_archive_free>;
using Probe = Handle<rc_probe_report, rc_probe_free>;
using Model = Handle<rc_model, rc_model_free>;
using Scores = Handle<rc_scores, rc_scores_free>;

void ReadManifest(const std::string& path, Manifest& m) {
  Check(rc_manifest_read(path.c_str(), m.out()), "reading manifest " + path);
}

void ReadArchive(const std::string& path, Archive& a) {
  Check(rc_archive_read(path.c_str(), a.out()), "reading archive " + path);
}

std::string SiblingJson(const std::string& tsv_path) {
  std::filesystem::path p(tsv_path);
  p.replace_extension(".json");
  return p.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replay-attack analysis and detection toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rc_version()));

  // synth
  rc_synth_options synth;
  rc_synth_options_init(&synth);
  std::string synth_out;
  uint64_t synth_seed = 7;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic genuine/replay corpus");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_seed, "Random seed");
  synth_cmd->add_option("--speakers", synth.n_speakers)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--phrases", synth.n_phrases)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--train-devices", synth.n_train_devices)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--heldout-devices", synth.n_heldout_devices)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--reps", synth.reps)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seconds", synth.utt_seconds, "Utterance length");

  // extract
  rc_extract_options ext;
  rc_extract_options_init(&ext);
  std::string ext_manifest, ext_out, ext_base;
  std::string ext_warp = "linear", ext_feature = "fbank";
  auto* extract_cmd = app.add_subcommand("extract", "Extract filterbank or cepstral features");
  extract_cmd->add_option("--manifest", ext_manifest)->required();
  extract_cmd->add_option("--warp", ext_warp)->check(CLI::IsMember({"linear", "mel", "imel"}));
  extract_cmd->add_option("--feature", ext_feature)
      ->check(CLI::IsMember({"fbank", "cepstra", "cepstra-delta"}));
  extract_cmd->add_option("--bands", ext.bands);
  extract_cmd->add_option("--frame-len", ext.frame_len, "Frame length in samples");
  extract_cmd->add_option("--hop", ext.hop, "Hop in samples");
  extract_cmd->add_option("--nfft", ext.n_fft);
  extract_cmd->add_option("--base-dir", ext_base,
                          "Directory for relative audio paths (default: the manifest's)");
  extract_cmd->add_option("--out", ext_out)->required();

  // probe
  std::string probe_archive, probe_manifest, probe_factor, probe_out,
      probe_json, probe_compare;
  auto* probe_cmd = app.add_subcommand("probe", "F-ratio patterns per factor value");
  probe_cmd->add_option("--archive", probe_archive)->required();
  probe_cmd->add_option("--manifest", probe_manifest)->required();
  probe_cmd->add_option("--factor", probe_factor)
      ->required()
      ->check(CLI::IsMember({"speaker", "phrase", "device", "dataset"}));
  probe_cmd->add_option("--compare", probe_compare,
                        "Second manifest for --factor dataset");
  probe_cmd->add_option("--out", probe_out, "Report TSV")->required();
  probe_cmd->add_option("--json", probe_json, "Report JSON (default: next to the TSV)");

  // train
  rc_train_options train;
  rc_train_options_init(&train);
  std::string train_archive, train_manifest, train_out, train_cov = "diag";
  auto* train_cmd = app.add_subcommand("train", "Train genuine/replay GMMs");
  train_cmd->add_option("--archive", train_archive)->required();
  train_cmd->add_option("--manifest", train_manifest)->required();
  train_cmd->add_option("--ncomp", train.n_comp)->check(CLI::PositiveNumber);
  train_cmd->add_option("--cov", train_cov)->check(CLI::IsMember({"diag", "full"}));
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--max-iters", train.max_iters);
  train_cmd->add_option("--tol", train.ll_tolerance, "EM stop threshold on |dLL| per frame");
  train_cmd->add_option("--floor", train.variance_floor_factor,
                        "Variance floor as a fraction of data variance");
  train_cmd->add_option("--out", train_out)->required();

  // score
  std::string score_archive, score_model, score_out, score_manifest;
  auto* score_cmd = app.add_subcommand("score", "Log-likelihood-ratio scores per utterance");
  score_cmd->add_option("--archive", score_archive)->required();
  score_cmd->add_option("--model", score_model)->required();
  score_cmd->add_option("--manifest", score_manifest, "Fill the label column from this manifest");
  score_cmd->add_option("--out", score_out)->required();

  // eval
  std::string eval_scores, eval_manifest;
  auto* eval_cmd = app.add_subcommand("eval", "Equal error rate of a score file");
  eval_cmd->add_option("--scores", eval_scores)->required();
  eval_cmd->add_option("--manifest", eval_manifest)->required();

  // study
  uint64_t study_seed = 7;
  std::string study_out;
  auto* study_cmd = app.add_subcommand("study", "Run the full synthetic study");
  study_cmd->add_option("--seed", study_seed);
  study_cmd->add_option("--out", study_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    if (*synth_cmd) {
      Check(rc_synth_corpus(&synth, synth_seed, synth_out.c_str()), "synth");
      std::printf("wrote corpus to %s\n", synth_out.c_str());
    } else if (*extract_cmd) {
      ext.warp = ext_warp == "mel"    ? RC_WARP_MEL
                 : ext_warp == "imel" ? RC_WARP_INVERTED_MEL
                                      : RC_WARP_LINEAR;
      ext.feature = ext_feature == "cepstra"         ? RC_FEATURE_CEPSTRA
                    : ext_feature == "cepstra-delta" ? RC_FEATURE_CEPSTRA_DELTA
                                                     : RC_FEATURE_FBANK;
      Manifest m;
      ReadManifest(ext_manifest, m);
      Archive a;
      Check(rc_extract(m.get(), ext_base.empty() ? nullptr : ext_base.c_str(),
                       &ext, a.out()),
            "extract");
      Check(rc_archive_write(a.get(), ext_out.c_str()), "writing " + ext_out);
      std::printf("%zu utterances, dim %d -> %s\n", rc_archive_size(a.get()),
                  rc_archive_dim(a.get()), ext_out.c_str());
    } else if (*probe_cmd) {
      Archive a;
      ReadArchive(probe_archive, a);
      Manifest m;
      ReadManifest(probe_manifest, m);
      Probe p;
      if (probe_factor == "dataset") {
        if (probe_compare.empty())
          throw CommandError{"probe: --factor dataset needs --compare MANIFEST"};
        Manifest other;
        ReadManifest(probe_compare, other);
        const auto stem = [](const std::string& s) {
          return std::filesystem::path(s).stem().string();
        };
        Check(rc_probe_datasets(a.get(), m.get(), stem(probe_manifest).c_str(),
                                other.get(), stem(probe_compare).c_str(), p.out()),
              "probe");
      } else {
        Check(rc_probe(a.get(), m.get(), probe_factor.c_str(), p.out()), "probe");
      }
      if (probe_json.empty()) probe_json = SiblingJson(probe_out);
      Check(rc_probe_write_tsv(p.get(), probe_out.c_str()), "writing " + probe_out);
      Check(rc_probe_write_json(p.get(), probe_json.c_str()), "writing " + probe_json);
      std::printf("factor %s: %zu patterns, dispersion %.6g\n", probe_factor.c_str(),
                  rc_probe_num_patterns(p.get()), rc_probe_dispersion(p.get()));
    } else if (*train_cmd) {
      train.covariance = train_cov == "full" ? RC_COV_FULL : RC_COV_DIAG;
      Archive a;
      ReadArchive(train_archive, a);
      Manifest m;
      ReadManifest(train_manifest, m);
      Model model;
      Check(rc_train(a.get(), m.get(), &train, model.out()), "train");
      Check(rc_model_write(model.get(), train_out.c_str()), "writing " + train_out);
      std::printf("model -> %s\n", train_out.c_str());
    } else if (*score_cmd) {
      Archive a;
      ReadArchive(score_archive, a);
      Model model;
      Check(rc_model_read(score_model.c_str(), model.out()), "reading model " + score_model);
      Manifest m;
      if (!score_manifest.empty()) ReadManifest(score_manifest, m);
      Scores s;
      Check(rc_score(model.get(), a.get(), m.get(), s.out()), "score");
      Check(rc_scores_write(s.get(), score_out.c_str()), "writing " + score_out);
      std::printf("%zu scores -> %s\n", rc_scores_size(s.get()), score_out.c_str());
    } else if (*eval_cmd) {
      Scores s;
      Check(rc_scores_read(eval_scores.c_str(), s.out()), "reading scores " + eval_scores);
      Manifest m;
      ReadManifest(eval_manifest, m);
      double eer = 0.0, threshold = 0.0;
      Check(rc_eer(s.get(), m.get(), &eer, &threshold), "eval");
      std::printf("EER %.2f%% threshold %.6g\n", 100.0 * eer, threshold);
    } else if (*study_cmd) {
      rc_study_summary summary;
      Check(rc_run_study(study_seed, study_out.c_str(), &summary), "study");
      const char* fbanks[] = {"L-Fbank", "M-Fbank", "IM-Fbank"};
      std::printf("pattern dispersion   speaker    phrase     device     dataset\n");
      for (int i = 0; i < 3; ++i)
        std::printf("%-20s %-10.6f %-10.6f %-10.6f %-10.6f\n", fbanks[i],
                    summary.dispersion[i][0], summary.dispersion[i][1],
                    summary.dispersion[i][2], summary.dispersion[i][3]);
      std::printf("EER(%%)      LFCC    MFCC    IMFCC\n");
      std::printf("GMM(Diag)   %-7.2f %-7.2f %-7.2f\n", 100 * summary.eer[0][0],
                  100 * summary.eer[1][0], 100 * summary.eer[2][0]);
      std::printf("GMM(Full)   %-7.2f %-7.2f %-7.2f\n", 100 * summary.eer[0][1],
                  100 * summary.eer[1][1], 100 * summary.eer[2][1]);
      std::printf("report -> %s/study_report.json\n", study_out.c_str());
    }
  } catch (const CommandError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return 1;
  }
  return 0;
}
