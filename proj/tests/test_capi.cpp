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


// Exercises the shared library through its C interface only.

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "replaycm/replaycm.h"
#include "support/gen.hpp"

extern "C" int capi_c_defaults_ok(void);

namespace {

using replaycm::testing::ScratchDir;

TEST(CApi, HeaderIsValidC) { EXPECT_TRUE(capi_c_defaults_ok()); }

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(rc_status_name(RC_OK), "Ok");
  EXPECT_STREQ(rc_status_name(RC_ERR_WRONG_SAMPLE_RATE), "WrongSampleRate");
  EXPECT_STREQ(rc_status_name(RC_ERR_DEGENERATE_BAND), "DegenerateBand");
  EXPECT_STREQ(rc_status_name(RC_ERR_ONE_CLASS_ONLY), "OneClassOnly");
  EXPECT_STREQ(rc_status_name(RC_ERR_INTERNAL), "Internal");
  EXPECT_GT(std::strlen(rc_version()), 0u);
}

TEST(CApi, ErrorsAreReportedNotThrown) {
  rc_signal* s = nullptr;
  EXPECT_EQ(rc_signal_read_wav("/nonexistent.wav", &s), RC_ERR_NOT_FOUND);
  EXPECT_EQ(s, nullptr);
  EXPECT_NE(std::string(rc_last_error()).find("nonexistent"), std::string::npos);
  EXPECT_EQ(rc_signal_read_wav(nullptr, &s), RC_ERR_INVALID_ARGUMENT);
  const double x[3] = {0.1, 0.2, 0.3};
  EXPECT_EQ(rc_signal_create(x, 3, 8000, &s), RC_ERR_WRONG_SAMPLE_RATE);
  const double loud[1] = {1.0};
  EXPECT_EQ(rc_signal_create(loud, 1, 16000, &s), RC_ERR_OUT_OF_RANGE);
  rc_manifest* m = nullptr;
  EXPECT_EQ(rc_manifest_read("/nonexistent.tsv", &m), RC_ERR_NOT_FOUND);
  rc_archive* a = nullptr;
  EXPECT_EQ(rc_archive_read("/nonexistent.rpfa", &a), RC_ERR_NOT_FOUND);
  // Freeing null handles is a no-op.
  rc_signal_free(nullptr);
  rc_manifest_free(nullptr);
  rc_archive_free(nullptr);
  rc_probe_free(nullptr);
  rc_model_free(nullptr);
  rc_scores_free(nullptr);
}

TEST(CApi, SignalRoundTripAndExtraction) {
  ScratchDir dir("capi_sig");
  std::vector<double> x(2000);
  for (size_t i = 0; i < x.size(); ++i) x[i] = 0.25 * std::sin(0.05 * i);
  rc_signal* s = nullptr;
  ASSERT_EQ(rc_signal_create(x.data(), x.size(), 16000, &s), RC_OK);
  const std::string path = (dir / "x.wav").string();
  ASSERT_EQ(rc_signal_write_wav(s, path.c_str()), RC_OK);
  rc_signal* back = nullptr;
  ASSERT_EQ(rc_signal_read_wav(path.c_str(), &back), RC_OK);
  EXPECT_EQ(rc_signal_length(back), 2000u);
  EXPECT_EQ(rc_signal_sample_rate(back), 16000);
  EXPECT_NEAR(rc_signal_samples(back)[100], x[100], 1.0 / 32768);

  rc_extract_options opt;
  rc_extract_options_init(&opt);
  opt.feature = RC_FEATURE_CEPSTRA_DELTA;
  size_t n = 0, dim = 0;
  ASSERT_EQ(rc_extract_signal(s, &opt, &n, &dim, nullptr, 0), RC_OK);
  EXPECT_EQ(n, 11u);
  EXPECT_EQ(dim, 26u);
  std::vector<double> values(n * dim);
  EXPECT_EQ(rc_extract_signal(s, &opt, &n, &dim, values.data(), 5),
            RC_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(rc_extract_signal(s, &opt, &n, &dim, values.data(), values.size()),
            RC_OK);
  opt.hop = 0;
  EXPECT_EQ(rc_extract_signal(s, &opt, &n, &dim, nullptr, 0),
            RC_ERR_INVALID_FRAMING);
  rc_signal_free(s);
  rc_signal_free(back);
}

// Full pipeline on a small synthetic corpus.
TEST(CApi, EndToEnd) {
  ScratchDir dir("capi_e2e");
  const std::string root = dir.path().string();
  rc_synth_options so;
  rc_synth_options_init(&so);
  so.n_speakers = 2;
  so.n_phrases = 2;
  so.n_train_devices = 2;
  so.n_heldout_devices = 2;
  so.utt_seconds = 0.5;
  ASSERT_EQ(rc_synth_corpus(&so, 9, root.c_str()), RC_OK) << rc_last_error();

  rc_manifest *all = nullptr, *train = nullptr, *held = nullptr;
  ASSERT_EQ(rc_manifest_read((root + "/manifest.tsv").c_str(), &all), RC_OK);
  ASSERT_EQ(rc_manifest_read((root + "/manifest_train.tsv").c_str(), &train), RC_OK);
  ASSERT_EQ(rc_manifest_read((root + "/manifest_heldout.tsv").c_str(), &held), RC_OK);
  EXPECT_EQ(rc_manifest_size(all), 8u + 32u);
  rc_utterance u;
  ASSERT_EQ(rc_manifest_get(all, 0, &u), RC_OK);
  EXPECT_EQ(u.label, RC_LABEL_GENUINE);
  EXPECT_STREQ(u.device_id, "-");
  EXPECT_EQ(rc_manifest_get(all, 999, &u), RC_ERR_OUT_OF_RANGE);

  rc_extract_options eo;
  rc_extract_options_init(&eo);
  rc_archive* fbank = nullptr;
  ASSERT_EQ(rc_extract(all, nullptr, &eo, &fbank), RC_OK) << rc_last_error();
  EXPECT_EQ(rc_archive_size(fbank), 40u);
  EXPECT_EQ(rc_archive_dim(fbank), 23);
  const std::string apath = root + "/fbank.rpfa";
  ASSERT_EQ(rc_archive_write(fbank, apath.c_str()), RC_OK);
  rc_archive* reread = nullptr;
  ASSERT_EQ(rc_archive_read(apath.c_str(), &reread), RC_OK);
  const char* id = nullptr;
  size_t frames = 0;
  const float *v1 = nullptr, *v2 = nullptr;
  ASSERT_EQ(rc_archive_entry(fbank, 3, &id, &frames, &v1), RC_OK);
  ASSERT_EQ(rc_archive_entry(reread, 3, &id, &frames, &v2), RC_OK);
  EXPECT_EQ(std::memcmp(v1, v2, frames * 23 * sizeof(float)), 0);

  rc_probe_report* probe = nullptr;
  ASSERT_EQ(rc_probe(fbank, all, "device", &probe), RC_OK) << rc_last_error();
  EXPECT_EQ(rc_probe_num_patterns(probe), 4u);
  EXPECT_GT(rc_probe_dispersion(probe), 0.0);
  const char* value = nullptr;
  size_t bands = 0;
  const double* f = nullptr;
  ASSERT_EQ(rc_probe_pattern(probe, 0, &value, &bands, &f), RC_OK);
  EXPECT_STREQ(value, "D00");
  EXPECT_EQ(bands, 23u);
  EXPECT_EQ(rc_probe_write_tsv(probe, (root + "/p.tsv").c_str()), RC_OK);
  EXPECT_EQ(rc_probe_write_json(probe, (root + "/p.json").c_str()), RC_OK);
  rc_probe_report* bad = nullptr;
  EXPECT_EQ(rc_probe(fbank, all, "room", &bad), RC_ERR_UNKNOWN_FACTOR);
  EXPECT_EQ(rc_probe(fbank, all, "dataset", &bad), RC_ERR_UNKNOWN_FACTOR);
  rc_probe_report* ds = nullptr;
  ASSERT_EQ(rc_probe_datasets(fbank, train, "train", held, "heldout", &ds), RC_OK);
  EXPECT_EQ(rc_probe_num_patterns(ds), 2u);

  eo.feature = RC_FEATURE_CEPSTRA_DELTA;
  eo.warp = RC_WARP_INVERTED_MEL;
  rc_archive* cep = nullptr;
  ASSERT_EQ(rc_extract(all, root.c_str(), &eo, &cep), RC_OK);
  rc_train_options to;
  rc_train_options_init(&to);
  to.n_comp = 2;
  to.max_iters = 5;
  rc_model* model = nullptr;
  ASSERT_EQ(rc_train(cep, train, &to, &model), RC_OK) << rc_last_error();
  EXPECT_EQ(rc_model_dim(model), 26);
  const std::string mpath = root + "/m.json";
  ASSERT_EQ(rc_model_write(model, mpath.c_str()), RC_OK);
  rc_model* model2 = nullptr;
  ASSERT_EQ(rc_model_read(mpath.c_str(), &model2), RC_OK);

  std::vector<double> frame(26, 0.0);
  double s1 = 0, s2 = 0;
  ASSERT_EQ(rc_model_score_frames(model, frame.data(), 1, 26, &s1), RC_OK);
  ASSERT_EQ(rc_model_score_frames(model2, frame.data(), 1, 26, &s2), RC_OK);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(rc_model_score_frames(model, frame.data(), 0, 26, &s1),
            RC_ERR_EMPTY_UTTERANCE);
  EXPECT_EQ(rc_model_score_frames(model, frame.data(), 2, 13, &s1),
            RC_ERR_DIMENSION_MISMATCH);

  rc_scores* scores = nullptr;
  ASSERT_EQ(rc_score(model, cep, nullptr, &scores), RC_OK);
  EXPECT_EQ(rc_scores_size(scores), 40u);
  double eer = -1, thr = 0;
  // Training utterances are not in the held-out manifest.
  EXPECT_EQ(rc_eer(scores, held, &eer, &thr), RC_ERR_NOT_FOUND);
  ASSERT_EQ(rc_eer(scores, all, &eer, &thr), RC_OK);
  EXPECT_GE(eer, 0.0);
  EXPECT_LE(eer, 1.0);
  const std::string spath = root + "/s.tsv";
  ASSERT_EQ(rc_scores_write(scores, spath.c_str()), RC_OK);
  rc_scores* back = nullptr;
  ASSERT_EQ(rc_scores_read(spath.c_str(), &back), RC_OK);
  for (size_t i = 0; i < rc_scores_size(back); ++i) {
    const char *a = nullptr, *b = nullptr;
    double x = 0, y = 0;
    rc_scores_get(scores, i, &a, &x);
    rc_scores_get(back, i, &b, &y);
    EXPECT_STREQ(a, b);
    EXPECT_EQ(x, y);
  }
  double eer2 = -1;
  ASSERT_EQ(rc_eer(back, all, &eer2, nullptr), RC_OK);
  EXPECT_EQ(eer, eer2);

  to.n_comp = 500;
  rc_model* too_big = nullptr;
  EXPECT_EQ(rc_train(cep, train, &to, &too_big), RC_ERR_TOO_FEW_FRAMES);

  for (rc_archive* a : {fbank, reread, cep}) rc_archive_free(a);
  for (rc_manifest* m : {all, train, held}) rc_manifest_free(m);
  rc_probe_free(probe);
  rc_probe_free(ds);
  rc_model_free(model);
  rc_model_free(model2);
  rc_scores_free(scores);
  rc_scores_free(back);
}

TEST(CApi, InvalidSynthConfig) {
  ScratchDir dir("capi_bad");
  rc_synth_options so;
  rc_synth_options_init(&so);
  so.utt_seconds = 0.1;
  EXPECT_EQ(rc_synth_corpus(&so, 1, dir.path().string().c_str()),
            RC_ERR_INVALID_CONFIG);
}

}  // namespace
