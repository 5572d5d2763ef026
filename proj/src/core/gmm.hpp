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


#ifndef REPLAYCM_CORE_GMM_HPP_
#define REPLAYCM_CORE_GMM_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/filterbank.hpp"
#include "core/types.hpp"

namespace replaycm {

enum class CovarianceKind { kDiag, kFull };

const char* CovarianceKindName(CovarianceKind kind);  // "diag" / "full"
CovarianceKind ParseCovarianceKind(std::string_view name);

inline constexpr double kMinWeight = 1e-8;

// Gaussian mixture with diagonal or full covariances. Parameters are fixed
// at construction, which also factorizes every covariance; the object is
// immutable afterwards and safe to share across threads.
class Gmm {
 public:
  // `covariances` is K x d for kDiag and K x (d*d) (row-major blocks) for
  // kFull. `variance_floor` (length d) is informational and may be empty.
  Gmm(CovarianceKind kind, Vector weights, Matrix means, Matrix covariances,
      Vector variance_floor = Vector());

  CovarianceKind kind() const { return kind_; }
  int num_components() const { return static_cast<int>(weights_.size()); }
  int dim() const { return static_cast<int>(means_.cols()); }
  const Vector& weights() const { return weights_; }
  const Matrix& means() const { return means_; }
  const Matrix& covariances() const { return covariances_; }
  const Vector& variance_floor() const { return variance_floor_; }

  // d x d covariance of component k (diagonal expanded for kDiag).
  Matrix Covariance(int k) const;

  // ln sum_k w_k N(x; mu_k, Sigma_k), via log-sum-exp.
  double LogLikelihood(const Eigen::Ref<const Eigen::RowVectorXd>& frame) const;

  // Per-frame log-likelihoods of the rows of `frames`.
  Vector FrameLogLikelihoods(const Matrix& frames) const;

  // n x K matrix of ln w_k + ln N(x_t; mu_k, Sigma_k).
  Matrix WeightedLogDensities(const Matrix& frames) const;

 private:
  CovarianceKind kind_;
  Vector weights_;
  Matrix means_;
  Matrix covariances_;
  Vector variance_floor_;
  // Cached: -0.5 (d ln 2pi + ln|Sigma_k|) + ln w_k.
  Vector log_norm_;
  Matrix inv_var_;                  // kDiag: K x d
  std::vector<Matrix> cholesky_;    // kFull: lower factors
};

struct TrainConfig {
  int max_iters = 100;
  double ll_tolerance = 1e-5;  // on |delta LL| per frame
  double variance_floor_factor = 1e-4;
  int kmeans_iters = 10;
};

struct TrainTrace {
  std::vector<double> log_likelihood;  // total LL before each M-step
  int iterations = 0;
  bool converged = false;
};

// EM from a seeded k-means++ initialization. Requires n >= 10 * K.
Gmm TrainGmm(const Matrix& frames, int n_comp, CovarianceKind kind,
             const TrainConfig& config, uint64_t seed,
             TrainTrace* trace = nullptr);

struct GmmPairModel {
  Gmm genuine;
  Gmm replay;
  std::string feature_kind;  // e.g. "IMFCC+Δ"
  nlohmann::json training_config = nlohmann::json::object();
};

// Frame-averaged log-likelihood ratio; higher means more genuine.
double ScoreUtterance(const GmmPairModel& pair, const FeatureMatrix& feats);
double ScoreUtterance(const GmmPairModel& pair, const Matrix& frames);

nlohmann::json GmmToJson(const Gmm& gmm);
Gmm GmmFromJson(const nlohmann::json& doc, CovarianceKind kind, int k, int d);
nlohmann::json ModelToJson(const GmmPairModel& model);
GmmPairModel ModelFromJson(const nlohmann::json& doc);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_GMM_HPP_
