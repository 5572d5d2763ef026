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


#include "core/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "core/error.hpp"

namespace replaycm {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);
// Components with less responsibility mass than this keep their parameters.
constexpr double kMinOccupancy = 1e-6;

double LogSumExp(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

// Weights >= kMinWeight and summing to one.
Vector FloorWeights(Vector w) {
  const Eigen::Index k = w.size();
  std::vector<bool> floored(k, false);
  // Floored entries are fixed; the rest share the remaining mass. Repeat
  // until no rescaled entry drops below the floor.
  for (int pass = 0; pass < k + 1; ++pass) {
    double fixed = 0.0, free_mass = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (floored[i]) fixed += kMinWeight;
      else free_mass += w[i];
    }
    bool changed = false;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (floored[i]) {
        w[i] = kMinWeight;
        continue;
      }
      w[i] = free_mass > 0.0 ? w[i] * (1.0 - fixed) / free_mass
                             : (1.0 - fixed) / static_cast<double>(k);
      if (w[i] < kMinWeight) {
        floored[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return w;
}

// Maximum-likelihood covariance under the constraint Sigma >= diag(floor):
// whiten by the floor, clip eigenvalues at one, and map back.
Matrix FloorFullCovariance(const Matrix& cov, const Vector& floor) {
  const Vector scale = floor.array().sqrt();
  const Vector inv_scale = scale.cwiseInverse();
  Matrix white = inv_scale.asDiagonal() * cov * inv_scale.asDiagonal();
  white = 0.5 * (white + white.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(white);
  const Vector clipped = eig.eigenvalues().cwiseMax(1.0);
  Matrix out = scale.asDiagonal() *
               (eig.eigenvectors() * clipped.asDiagonal() *
                eig.eigenvectors().transpose()) *
               scale.asDiagonal();
  return 0.5 * (out + out.transpose());
}

void StoreCovariance(Matrix& covs, int k, CovarianceKind kind,
                     const Matrix& cov) {
  const int d = static_cast<int>(cov.rows());
  if (kind == CovarianceKind::kDiag) {
    covs.row(k) = cov.diagonal().transpose();
  } else {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) covs(k, i * d + j) = cov(i, j);
  }
}

Matrix FloorCovariance(const Matrix& cov, CovarianceKind kind,
                       const Vector& floor) {
  if (kind == CovarianceKind::kDiag) {
    Matrix out = Matrix::Zero(cov.rows(), cov.cols());
    out.diagonal() = cov.diagonal().cwiseMax(floor);
    return out;
  }
  return FloorFullCovariance(cov, floor);
}

// Weighted population covariance about `mean`; weights may be all ones.
Matrix WeightedCovariance(const Matrix& x, const Vector& resp,
                          const Eigen::RowVectorXd& mean, double total) {
  const Matrix centered = x.rowwise() - mean;
  return (centered.array().colwise() * resp.array()).matrix().transpose() *
         centered / total;
}

std::vector<int> KMeans(const Matrix& x, int k, int iters,
                        std::mt19937_64& rng, Matrix& centers) {
  const Eigen::Index n = x.rows();
  centers.resize(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centers.row(0) = x.row(pick(rng));
  Vector d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      while (chosen < n - 1 && u >= d2[chosen]) u -= d2[chosen++];
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> assign(n, 0);
  for (int it = 0; it < iters; ++it) {
    for (Eigen::Index t = 0; t < n; ++t) {
      Eigen::Index best = 0;
      (centers.rowwise() - x.row(t)).rowwise().squaredNorm().minCoeff(&best);
      assign[t] = static_cast<int>(best);
    }
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<long long> counts(k, 0);
    for (Eigen::Index t = 0; t < n; ++t) {
      sums.row(assign[t]) += x.row(t);
      ++counts[assign[t]];
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
  }
  return assign;
}

}  // namespace

const char* CovarianceKindName(CovarianceKind kind) {
  return kind == CovarianceKind::kDiag ? "diag" : "full";
}

CovarianceKind ParseCovarianceKind(std::string_view name) {
  if (name == "diag") return CovarianceKind::kDiag;
  if (name == "full") return CovarianceKind::kFull;
  Fail(ErrorCode::kInvalidArgument,
       "unknown covariance kind '" + std::string(name) + "'");
}

Gmm::Gmm(CovarianceKind kind, Vector weights, Matrix means, Matrix covariances,
         Vector variance_floor)
    : kind_(kind),
      weights_(std::move(weights)),
      means_(std::move(means)),
      covariances_(std::move(covariances)),
      variance_floor_(std::move(variance_floor)) {
  const Eigen::Index k = weights_.size(), d = means_.cols();
  if (k < 1 || d < 1 || means_.rows() != k || covariances_.rows() != k ||
      covariances_.cols() != (kind_ == CovarianceKind::kDiag ? d : d * d))
    Fail(ErrorCode::kDimensionMismatch, "inconsistent GMM parameter shapes");
  if (std::abs(weights_.sum() - 1.0) > 1e-9 || weights_.minCoeff() < kMinWeight * (1 - 1e-12))
    Fail(ErrorCode::kInvalidArgument,
         "mixture weights must be >= 1e-8 and sum to one");

  log_norm_.resize(k);
  if (kind_ == CovarianceKind::kDiag) {
    if (!(covariances_.minCoeff() > 0.0))
      Fail(ErrorCode::kSingularComponent, "non-positive diagonal variance");
    inv_var_ = covariances_.cwiseInverse();
    for (Eigen::Index c = 0; c < k; ++c)
      log_norm_[c] = std::log(weights_[c]) -
                     0.5 * (d * kLog2Pi + covariances_.row(c).array().log().sum());
  } else {
    cholesky_.reserve(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const Matrix cov = Covariance(static_cast<int>(c));
      Eigen::LLT<Matrix> llt(cov);
      if (llt.info() != Eigen::Success || !(llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0))
        Fail(ErrorCode::kSingularComponent,
             "component " + std::to_string(c) +
                 " covariance is not positive definite (min diagonal " +
                 std::to_string(cov.diagonal().minCoeff()) + ")");
      Matrix lower = llt.matrixL();
      const double log_det = 2.0 * lower.diagonal().array().log().sum();
      log_norm_[c] = std::log(weights_[c]) - 0.5 * (d * kLog2Pi + log_det);
      cholesky_.push_back(std::move(lower));
    }
  }
}

Matrix Gmm::Covariance(int k) const {
  const int d = dim();
  if (kind_ == CovarianceKind::kDiag)
    return covariances_.row(k).transpose().asDiagonal();
  Matrix cov(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) cov(i, j) = covariances_(k, i * d + j);
  return cov;
}

Matrix Gmm::WeightedLogDensities(const Matrix& frames) const {
  if (frames.cols() != dim())
    Fail(ErrorCode::kDimensionMismatch,
         "frame dim " + std::to_string(frames.cols()) + " vs model dim " +
             std::to_string(dim()));
  const Eigen::Index n = frames.rows();
  Matrix out(n, num_components());
  for (int c = 0; c < num_components(); ++c) {
    const Matrix centered = frames.rowwise() - means_.row(c);
    Vector quad;
    if (kind_ == CovarianceKind::kDiag) {
      quad = (centered.array().square().rowwise() * inv_var_.row(c).array())
                 .rowwise()
                 .sum();
    } else {
      const Eigen::MatrixXd solved =
          cholesky_[c].triangularView<Eigen::Lower>().solve(
              centered.transpose());
      quad = solved.colwise().squaredNorm().transpose();
    }
    out.col(c) = log_norm_[c] - 0.5 * quad.array();
  }
  return out;
}

Vector Gmm::FrameLogLikelihoods(const Matrix& frames) const {
  const Matrix dens = WeightedLogDensities(frames);
  Vector out(dens.rows());
  for (Eigen::Index t = 0; t < dens.rows(); ++t) out[t] = LogSumExp(dens.row(t));
  return out;
}

double Gmm::LogLikelihood(
    const Eigen::Ref<const Eigen::RowVectorXd>& frame) const {
  if (frame.size() != dim())
    Fail(ErrorCode::kDimensionMismatch,
         "frame dim " + std::to_string(frame.size()) + " vs model dim " +
             std::to_string(dim()));
  Matrix one = frame;
  return FrameLogLikelihoods(one)[0];
}

Gmm TrainGmm(const Matrix& x, int n_comp, CovarianceKind kind,
             const TrainConfig& config, uint64_t seed, TrainTrace* trace) {
  const Eigen::Index n = x.rows();
  const int d = static_cast<int>(x.cols());
  if (n_comp < 1 || d < 1)
    Fail(ErrorCode::kInvalidArgument, "need K >= 1 and d >= 1");
  if (n < 10LL * n_comp)
    Fail(ErrorCode::kTooFewFrames,
         std::to_string(n) + " frames for K=" + std::to_string(n_comp) +
             " (need >= " + std::to_string(10LL * n_comp) + ")");
  if (!x.allFinite())
    Fail(ErrorCode::kInvalidArgument, "training frames contain NaN or Inf");

  const Eigen::RowVectorXd data_mean = x.colwise().mean();
  const Vector data_var =
      (x.rowwise() - data_mean).array().square().colwise().mean().transpose();
  const Vector floor =
      (config.variance_floor_factor * data_var.array()).cwiseMax(1e-12).matrix();

  std::mt19937_64 rng(seed);
  Matrix means;
  const std::vector<int> assign =
      KMeans(x, n_comp, config.kmeans_iters, rng, means);

  const Matrix global_cov =
      WeightedCovariance(x, Vector::Ones(n), data_mean, static_cast<double>(n));
  Vector weights(n_comp);
  Matrix covs(n_comp, kind == CovarianceKind::kDiag ? d : d * d);
  for (int c = 0; c < n_comp; ++c) {
    Vector member = Vector::Zero(n);
    for (Eigen::Index t = 0; t < n; ++t) member[t] = assign[t] == c;
    const double count = member.sum();
    weights[c] = count / static_cast<double>(n);
    const Matrix cov = count >= 2.0
                           ? WeightedCovariance(x, member, means.row(c), count)
                           : global_cov;
    StoreCovariance(covs, c, kind, FloorCovariance(cov, kind, floor));
  }
  Gmm model(kind, FloorWeights(weights), means, covs, floor);

  TrainTrace local;
  TrainTrace& tr = trace ? *trace : local;
  tr = TrainTrace{};
  for (int iter = 0;; ++iter) {
    // E-step.
    const Matrix dens = model.WeightedLogDensities(x);
    Vector lse(n);
    for (Eigen::Index t = 0; t < n; ++t) lse[t] = LogSumExp(dens.row(t));
    const double ll = lse.sum();
    if (!std::isfinite(ll))
      Fail(ErrorCode::kSingularComponent, "training log-likelihood diverged");
    tr.log_likelihood.push_back(ll);
    if (iter > 0) {
      const double prev = tr.log_likelihood[tr.log_likelihood.size() - 2];
      if (std::abs(ll - prev) / static_cast<double>(n) < config.ll_tolerance) {
        tr.converged = true;
        break;
      }
    }
    if (iter >= config.max_iters) break;

    // M-step.
    const Matrix resp = (dens.colwise() - lse).array().exp().matrix();
    const Eigen::RowVectorXd occupancy = resp.colwise().sum();
    Vector new_weights = occupancy.transpose() / static_cast<double>(n);
    Matrix new_means = model.means();
    Matrix new_covs = model.covariances();
    for (int c = 0; c < n_comp; ++c) {
      const double occ = occupancy[c];
      if (occ < kMinOccupancy) continue;
      const Vector r = resp.col(c);
      new_means.row(c) = (r.transpose() * x) / occ;
      Matrix cov;
      if (kind == CovarianceKind::kDiag) {
        const Matrix centered = x.rowwise() - new_means.row(c);
        cov = Matrix::Zero(d, d);
        cov.diagonal() =
            (r.transpose() * centered.array().square().matrix()).transpose() /
            occ;
      } else {
        cov = WeightedCovariance(x, r, new_means.row(c), occ);
      }
      StoreCovariance(new_covs, c, kind, FloorCovariance(cov, kind, floor));
    }
    try {
      model = Gmm(kind, FloorWeights(new_weights), new_means, new_covs, floor);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSingularComponent,
                  std::string(e.what()) + " after EM iteration " +
                      std::to_string(iter + 1));
    }
    tr.iterations = iter + 1;
  }
  return model;
}

double ScoreUtterance(const GmmPairModel& pair, const Matrix& frames) {
  if (frames.rows() < 1)
    Fail(ErrorCode::kEmptyUtterance, "cannot score an utterance with no frames");
  const Vector g = pair.genuine.FrameLogLikelihoods(frames);
  const Vector r = pair.replay.FrameLogLikelihoods(frames);
  double acc = 0.0;
  for (Eigen::Index t = 0; t < frames.rows(); ++t) acc += g[t] - r[t];
  return acc / static_cast<double>(frames.rows());
}

double ScoreUtterance(const GmmPairModel& pair, const FeatureMatrix& feats) {
  return ScoreUtterance(pair, feats.values);
}

nlohmann::json GmmToJson(const Gmm& gmm) {
  auto flat = [](const Matrix& m) {
    return std::vector<double>(m.data(), m.data() + m.size());
  };
  nlohmann::json means = nlohmann::json::array();
  for (Eigen::Index c = 0; c < gmm.means().rows(); ++c)
    means.push_back(flat(gmm.means().row(c)));
  return {{"weights", std::vector<double>(gmm.weights().data(),
                                          gmm.weights().data() +
                                              gmm.weights().size())},
          {"means", means},
          {"covariances", flat(gmm.covariances())},
          {"variance_floor",
           std::vector<double>(gmm.variance_floor().data(),
                               gmm.variance_floor().data() +
                                   gmm.variance_floor().size())}};
}

Gmm GmmFromJson(const nlohmann::json& doc, CovarianceKind kind, int k, int d) {
  try {
    const auto w = doc.at("weights").get<std::vector<double>>();
    const auto covs = doc.at("covariances").get<std::vector<double>>();
    const size_t cov_width = kind == CovarianceKind::kDiag ? d : size_t(d) * d;
    if (w.size() != size_t(k) || doc.at("means").size() != size_t(k) ||
        covs.size() != size_t(k) * cov_width)
      Fail(ErrorCode::kDimensionMismatch, "GMM arrays disagree with K/d");
    Vector weights = Eigen::Map<const Vector>(w.data(), k);
    Matrix means(k, d);
    for (int c = 0; c < k; ++c) {
      const auto row = doc.at("means").at(c).get<std::vector<double>>();
      if (row.size() != size_t(d))
        Fail(ErrorCode::kDimensionMismatch, "mean row length != d");
      for (int j = 0; j < d; ++j) means(c, j) = row[j];
    }
    Matrix cov = Eigen::Map<const Matrix>(covs.data(), k, cov_width);
    Vector floor;
    if (doc.contains("variance_floor")) {
      const auto f = doc.at("variance_floor").get<std::vector<double>>();
      floor = Eigen::Map<const Vector>(f.data(), f.size());
    }
    return Gmm(kind, weights, means, cov, floor);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kUnsupportedFormat, std::string("model JSON: ") + e.what());
  }
}

nlohmann::json ModelToJson(const GmmPairModel& model) {
  return {{"feature_kind", model.feature_kind},
          {"covariance_kind", CovarianceKindName(model.genuine.kind())},
          {"K", model.genuine.num_components()},
          {"d", model.genuine.dim()},
          {"training_config", model.training_config},
          {"genuine", GmmToJson(model.genuine)},
          {"replay", GmmToJson(model.replay)}};
}

GmmPairModel ModelFromJson(const nlohmann::json& doc) {
  try {
    const CovarianceKind kind =
        ParseCovarianceKind(doc.at("covariance_kind").get<std::string>());
    const int k = doc.at("K").get<int>();
    const int d = doc.at("d").get<int>();
    GmmPairModel model{GmmFromJson(doc.at("genuine"), kind, k, d),
                       GmmFromJson(doc.at("replay"), kind, k, d),
                       doc.at("feature_kind").get<std::string>(),
                       doc.value("training_config", nlohmann::json::object())};
    return model;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kUnsupportedFormat, std::string("model JSON: ") + e.what());
  }
}

}  // namespace replaycm
