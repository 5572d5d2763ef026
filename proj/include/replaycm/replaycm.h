/*
 * Copyright 2026 The replaycm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * replaycm: replay-attack analysis and detection.
 *
 * C interface over the library. All objects are opaque handles created by
 * rc_*_read / rc_*_create / rc_* factory calls and released with the
 * matching rc_*_free. Every fallible call returns an rc_status; on failure
 * the output handle is left untouched and rc_last_error() describes the
 * problem (thread-local, valid until the next failing call on the same
 * thread). Handles are immutable after creation and may be shared across
 * threads for reading.
 */

#ifndef REPLAYCM_REPLAYCM_H_
#define REPLAYCM_REPLAYCM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REPLAYCM_BUILDING)
#    define RC_API __declspec(dllexport)
#  else
#    define RC_API __declspec(dllimport)
#  endif
#else
#  define RC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
  RC_OK = 0,
  RC_ERR_INVALID_ARGUMENT = 1,
  RC_ERR_IO = 2,
  RC_ERR_NOT_FOUND = 10,
  RC_ERR_UNSUPPORTED_FORMAT = 11,
  RC_ERR_WRONG_SAMPLE_RATE = 12,
  RC_ERR_MISSING_COLUMN = 13,
  RC_ERR_UNKNOWN_LABEL = 14,
  RC_ERR_DUPLICATE_UTT_ID = 15,
  RC_ERR_EMPTY_MANIFEST = 16,
  RC_ERR_INVALID_CONFIG = 17,
  RC_ERR_INVALID_FRAMING = 20,
  RC_ERR_FFT_SIZE_TOO_SMALL = 21,
  RC_ERR_INVALID_OUTPUT_SIZE = 22,
  RC_ERR_OUT_OF_RANGE = 30,
  RC_ERR_INVALID_BAND = 31,
  RC_ERR_TOO_MANY_FILTERS = 32,
  RC_ERR_MISMATCHED_CONFIG = 33,
  RC_ERR_WRONG_KIND = 34,
  RC_ERR_EMPTY_INPUT = 35,
  RC_ERR_TOO_FEW_FRAMES = 40,
  RC_ERR_DEGENERATE_BAND = 41,
  RC_ERR_UNKNOWN_FACTOR = 42,
  RC_ERR_MISMATCHED_M = 43,
  RC_ERR_ZERO_PATTERN = 44,
  RC_ERR_SINGULAR_COMPONENT = 50,
  RC_ERR_DIMENSION_MISMATCH = 51,
  RC_ERR_EMPTY_UTTERANCE = 52,
  RC_ERR_ONE_CLASS_ONLY = 60,
  RC_ERR_BAD_MAGIC = 70,
  RC_ERR_UNSUPPORTED_VERSION = 71,
  RC_ERR_TRUNCATED = 72,
  RC_ERR_INTERNAL = 99
} rc_status;

RC_API const char* rc_status_name(rc_status status);
RC_API const char* rc_last_error(void);
RC_API const char* rc_version(void);

/* ---- audio ------------------------------------------------------------ */

typedef struct rc_signal rc_signal;

/* 16-bit PCM mono 16 kHz WAV; samples map to s / 32768. */
RC_API rc_status rc_signal_read_wav(const char* path, rc_signal** out);
RC_API rc_status rc_signal_write_wav(const rc_signal* signal, const char* path);
RC_API rc_status rc_signal_create(const double* samples, size_t n,
                                  int sample_rate, rc_signal** out);
RC_API size_t rc_signal_length(const rc_signal* signal);
RC_API int rc_signal_sample_rate(const rc_signal* signal);
RC_API const double* rc_signal_samples(const rc_signal* signal);
RC_API void rc_signal_free(rc_signal* signal);

/* ---- manifests -------------------------------------------------------- */

typedef struct rc_manifest rc_manifest;

typedef enum rc_label { RC_LABEL_GENUINE = 0, RC_LABEL_REPLAY = 1 } rc_label;

typedef struct rc_utterance {
  const char* utt_id;
  const char* audio_path;
  rc_label label;
  const char* speaker_id;
  const char* phrase_id;
  const char* device_id; /* "-" for genuine */
} rc_utterance;

RC_API rc_status rc_manifest_read(const char* path, rc_manifest** out);
RC_API rc_status rc_manifest_write(const rc_manifest* manifest,
                                   const char* path);
RC_API size_t rc_manifest_size(const rc_manifest* manifest);
/* Strings stay valid for the lifetime of the manifest. */
RC_API rc_status rc_manifest_get(const rc_manifest* manifest, size_t index,
                                 rc_utterance* out);
RC_API void rc_manifest_free(rc_manifest* manifest);

/* ---- synthetic corpus ------------------------------------------------- */

typedef struct rc_synth_options {
  int n_speakers;        /* default 6 */
  int n_phrases;         /* default 4 */
  int n_train_devices;   /* default 3 */
  int n_heldout_devices; /* default 3 */
  double utt_seconds;    /* default 2.0 */
  int reps;              /* default 2 */
} rc_synth_options;

RC_API void rc_synth_options_init(rc_synth_options* options);

/* Writes <out_dir>/wav/, manifest.tsv, devices.json and, when reps >= 2,
   manifest_train.tsv / manifest_heldout.tsv (device-disjoint split). */
RC_API rc_status rc_synth_corpus(const rc_synth_options* options,
                                 uint64_t seed, const char* out_dir);

/* ---- features --------------------------------------------------------- */

typedef struct rc_archive rc_archive;

typedef enum rc_warp {
  RC_WARP_LINEAR = 0,
  RC_WARP_MEL = 1,
  RC_WARP_INVERTED_MEL = 2
} rc_warp;

typedef enum rc_feature {
  RC_FEATURE_FBANK = 0,        /* log filterbank energies, dim = bands */
  RC_FEATURE_CEPSTRA = 1,      /* 13 cepstra */
  RC_FEATURE_CEPSTRA_DELTA = 2 /* 13 cepstra + 13 deltas */
} rc_feature;

typedef struct rc_extract_options {
  rc_warp warp;
  rc_feature feature;
  int bands;     /* default 23 */
  int frame_len; /* default 400 samples */
  int hop;       /* default 160 samples */
  int n_fft;     /* default 512 */
  double f_lo;   /* default 0 Hz */
  double f_hi;   /* default 8000 Hz */
  int delta_window; /* default 2 */
} rc_extract_options;

RC_API void rc_extract_options_init(rc_extract_options* options);

/* Reads every manifest WAV (relative paths resolve against base_dir, or the
   manifest's directory when base_dir is NULL). */
RC_API rc_status rc_extract(const rc_manifest* manifest, const char* base_dir,
                            const rc_extract_options* options,
                            rc_archive** out);
RC_API rc_status rc_extract_signal(const rc_signal* signal,
                                   const rc_extract_options* options,
                                   size_t* n_frames, size_t* dim,
                                   double* values, size_t capacity);

RC_API rc_status rc_archive_read(const char* path, rc_archive** out);
RC_API rc_status rc_archive_write(const rc_archive* archive, const char* path);
RC_API size_t rc_archive_size(const rc_archive* archive);
RC_API int rc_archive_dim(const rc_archive* archive);
/* Entries are ordered by utt_id. `values` may be NULL to query the shape. */
RC_API rc_status rc_archive_entry(const rc_archive* archive, size_t index,
                                  const char** utt_id, size_t* n_frames,
                                  const float** values);
RC_API void rc_archive_free(rc_archive* archive);

/* ---- F-ratio probing -------------------------------------------------- */

typedef struct rc_probe_report rc_probe_report;

/* factor: "speaker", "phrase" or "device". Needs a log-Fbank archive. */
RC_API rc_status rc_probe(const rc_archive* archive,
                          const rc_manifest* manifest, const char* factor,
                          rc_probe_report** out);
/* Factor "dataset": one pattern per manifest. */
RC_API rc_status rc_probe_datasets(const rc_archive* archive,
                                   const rc_manifest* first,
                                   const char* first_name,
                                   const rc_manifest* second,
                                   const char* second_name,
                                   rc_probe_report** out);
RC_API double rc_probe_dispersion(const rc_probe_report* report);
RC_API size_t rc_probe_num_patterns(const rc_probe_report* report);
RC_API rc_status rc_probe_pattern(const rc_probe_report* report, size_t index,
                                  const char** value, size_t* bands,
                                  const double** fratio);
RC_API rc_status rc_probe_write_tsv(const rc_probe_report* report,
                                    const char* path);
RC_API rc_status rc_probe_write_json(const rc_probe_report* report,
                                     const char* path);
RC_API void rc_probe_free(rc_probe_report* report);

/* ---- GMM detector ----------------------------------------------------- */

typedef struct rc_model rc_model;

typedef enum rc_covariance { RC_COV_DIAG = 0, RC_COV_FULL = 1 } rc_covariance;

typedef struct rc_train_options {
  int n_comp;                   /* default 64 */
  rc_covariance covariance;     /* default RC_COV_DIAG */
  int max_iters;                /* default 100 */
  double ll_tolerance;          /* default 1e-5 per frame */
  double variance_floor_factor; /* default 1e-4 */
  uint64_t seed;                /* default 0 */
} rc_train_options;

RC_API void rc_train_options_init(rc_train_options* options);

/* Genuine model from the manifest's genuine utterances, replay model from
   its replay utterances; all must be present in the archive. */
RC_API rc_status rc_train(const rc_archive* archive,
                          const rc_manifest* manifest,
                          const rc_train_options* options, rc_model** out);
RC_API rc_status rc_model_read(const char* path, rc_model** out);
RC_API rc_status rc_model_write(const rc_model* model, const char* path);
RC_API int rc_model_dim(const rc_model* model);
RC_API void rc_model_free(rc_model* model);

/* Frame-averaged log-likelihood ratio of one utterance (row-major frames). */
RC_API rc_status rc_model_score_frames(const rc_model* model,
                                       const double* frames, size_t n_frames,
                                       size_t dim, double* score);

/* ---- scores and EER --------------------------------------------------- */

typedef struct rc_scores rc_scores;

/* Scores every archive entry; labels are taken from `manifest` when it is
   not NULL, otherwise written as "-". */
RC_API rc_status rc_score(const rc_model* model, const rc_archive* archive,
                          const rc_manifest* manifest, rc_scores** out);
RC_API rc_status rc_scores_read(const char* path, rc_scores** out);
RC_API rc_status rc_scores_write(const rc_scores* scores, const char* path);
RC_API size_t rc_scores_size(const rc_scores* scores);
RC_API rc_status rc_scores_get(const rc_scores* scores, size_t index,
                               const char** utt_id, double* score);
RC_API void rc_scores_free(rc_scores* scores);

/* EER (fraction) and threshold. Labels come from `manifest`. */
RC_API rc_status rc_eer(const rc_scores* scores, const rc_manifest* manifest,
                        double* eer, double* threshold);

/* ---- end-to-end study ------------------------------------------------- */

typedef struct rc_study_summary {
  /* [fbank][factor]: fbank 0..2 = linear, mel, imel;
     factor 0..3 = speaker, phrase, device, dataset. */
  double dispersion[3][4];
  /* [feature][cov]: feature 0..2 = LFCC, MFCC, IMFCC; cov 0..1 = diag, full */
  double eer[3][2];
} rc_study_summary;

/* Runs the full synthetic study into out_dir. `summary` may be NULL. */
RC_API rc_status rc_run_study(uint64_t seed, const char* out_dir,
                              rc_study_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* REPLAYCM_REPLAYCM_H_ */
