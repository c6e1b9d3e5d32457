// Copyright 2026 The PF-TS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pfts/pref_inference.h"

#include <cmath>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "pfts/error.h"

namespace pfts {
namespace {

// Dedupes points by exact coordinates.
class BasisBuilder {
 public:
  Eigen::Index IndexOf(const Point& p) {
    std::vector<double> key(p.data(), p.data() + p.size());
    auto [it, inserted] =
        index_.emplace(std::move(key), static_cast<Eigen::Index>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }

  std::vector<Point> Release() { return std::move(points_); }

 private:
  std::map<std::vector<double>, Eigen::Index> index_;
  std::vector<Point> points_;
};

}  // namespace

double Logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double LogisticDerivative(double u) {
  const double p = Logistic(u);
  return p * (1.0 - p);
}

double Softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double KappaFromNormBound(double norm_bound) {
  return 1.0 / LogisticDerivative(2.0 * norm_bound);
}

void PreferenceHistory::Append(Point first, Point second, int label) {
  if (label != 0 && label != 1) {
    throw Error(ErrorCode::kInvalidArgument, "preference label must be 0 or 1");
  }
  if (first.size() != second.size() ||
      (!records_.empty() && first.size() != records_[0].first.size())) {
    throw Error(ErrorCode::kDimensionMismatch,
                "preference record has inconsistent dimensions");
  }
  records_.push_back({std::move(first), std::move(second), label});
}

Eigen::VectorXd PrefPosterior::ApplyIncidence(
    const Eigen::VectorXd& basis_values) const {
  const Eigen::Index t = static_cast<Eigen::Index>(first_index_.size());
  Eigen::VectorXd out(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    out[i] = basis_values[first_index_[i]] - basis_values[second_index_[i]];
  }
  return out;
}

Eigen::VectorXd PrefPosterior::ApplyIncidenceT(
    const Eigen::VectorXd& pair_values) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis_.size());
  for (size_t i = 0; i < first_index_.size(); ++i) {
    if (first_index_[i] == second_index_[i]) continue;
    out[first_index_[i]] += pair_values[i];
    out[second_index_[i]] -= pair_values[i];
  }
  return out;
}

Eigen::VectorXd PrefPosterior::PairMeans(const Eigen::VectorXd& theta) const {
  if (theta.size() == 0) return theta;
  return ApplyIncidence(basis_gram_ * ApplyIncidenceT(theta));
}

double PrefPosterior::Loss(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd h = PairMeans(theta);
  double loss = 0.5 * lambda_ * theta.squaredNorm();
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    loss += Softplus(h[i]) - labels_[i] * h[i];
  }
  return loss;
}

Eigen::VectorXd PrefPosterior::LossGradient(const Eigen::VectorXd& theta) const {
  if (theta.size() == 0) return theta;
  const Eigen::VectorXd h = PairMeans(theta);
  Eigen::VectorXd residual(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    residual[i] = Logistic(h[i]) - labels_[i];
  }
  return PairMeans(residual) + lambda_ * theta;
}

Eigen::VectorXd PrefPosterior::BasisContrast(const PointPair& z) const {
  Eigen::VectorXd out(basis_.size());
  for (size_t j = 0; j < basis_.size(); ++j) {
    out[j] = EvalBase(dueling_.base, basis_[j], z.first) -
             EvalBase(dueling_.base, basis_[j], z.second);
  }
  return out;
}

double PrefPosterior::Mean(const PointPair& z) const {
  if (basis_.empty()) return 0.0;
  return BasisContrast(z).dot(basis_weights_);
}

double PrefPosterior::UtilityMean(const Point& x) const {
  double value = 0.0;
  for (size_t j = 0; j < basis_.size(); ++j) {
    value += basis_weights_[j] * EvalBase(dueling_.base, basis_[j], x);
  }
  return value;
}

double PrefPosterior::Covariance(const PointPair& z1,
                                 const PointPair& z2) const {
  const double prior = EvalDueling(dueling_, z1, z2);
  if (reduction_.rows() == 0) return prior;
  const Eigen::VectorXd a =
      HalfSolvePsd(cov_factor_, reduction_ * BasisContrast(z1)).col(0);
  const Eigen::VectorXd b =
      HalfSolvePsd(cov_factor_, reduction_ * BasisContrast(z2)).col(0);
  return prior - a.dot(b);
}

double PrefPosterior::StdDev(const PointPair& z) const {
  return std::sqrt(std::max(0.0, Covariance(z, z)));
}

AnchoredMoments PrefPosterior::Anchored(std::span<const Point> candidates,
                                        const Point& anchor) const {
  const Eigen::Index m = static_cast<Eigen::Index>(candidates.size());
  const BaseKernel& k = dueling_.base;
  AnchoredMoments out;
  out.mean.resize(m);
  out.covariance.resize(m, m);

  Eigen::VectorXd to_anchor(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    to_anchor[j] = EvalBase(k, candidates[j], anchor);
  }
  const double anchor_self = EvalBase(k, anchor, anchor);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double prior = EvalBase(k, candidates[i], candidates[j]) +
                           anchor_self - to_anchor[i] - to_anchor[j];
      out.covariance(i, j) = out.covariance(j, i) = prior;
    }
  }

  if (basis_.empty()) {
    out.mean.setZero();
    return out;
  }
  // contrast(:, j) = [k(u_i, x_j) - k(u_i, x0)]_i
  Eigen::MatrixXd contrast = CrossGram(k, basis_, candidates);
  for (size_t i = 0; i < basis_.size(); ++i) {
    contrast.row(i).array() -= EvalBase(k, basis_[i], anchor);
  }
  out.mean = contrast.transpose() * basis_weights_;
  if (reduction_.rows() > 0) {
    const Eigen::MatrixXd half = HalfSolvePsd(cov_factor_, reduction_ * contrast);
    out.covariance.noalias() -= half.transpose() * half;
  }
  return out;
}

double PrefPosterior::Beta(double delta) const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  }
  return 4.0 * norm_bound_ +
         2.0 * std::sqrt(2.0 * kappa_ / lambda_ *
                         (realized_gain_ + std::log(1.0 / delta)));
}

Eigen::MatrixXd PrefPosterior::DuelingGram() const {
  const Eigen::Index t = static_cast<Eigen::Index>(first_index_.size());
  Eigen::MatrixXd out(t, t);
  for (Eigen::Index j = 0; j < t; ++j) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(t);
    unit[j] = 1.0;
    out.col(j) = PairMeans(unit);
  }
  return out;
}

PrefPosterior FitPreferencePosterior(const PreferenceHistory& history,
                                     const DuelingKernel& dueling,
                                     double lambda, double norm_bound,
                                     const FitOptions& options) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
  if (!(norm_bound >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "norm bound must be >= 0");
  }
  dueling.base.Validate();

  PrefPosterior post;
  post.history_ = history;
  post.dueling_ = dueling;
  post.lambda_ = lambda;
  post.norm_bound_ = norm_bound;
  post.kappa_ = options.kappa.value_or(KappaFromNormBound(norm_bound));
  if (!(post.kappa_ > 0.0) || !std::isfinite(post.kappa_)) {
    throw Error(ErrorCode::kInvalidArgument, "kappa must be finite and > 0");
  }

  const Eigen::Index t = static_cast<Eigen::Index>(history.size());
  BasisBuilder builder;
  post.first_index_.resize(t);
  post.second_index_.resize(t);
  post.labels_.resize(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    post.first_index_[i] = builder.IndexOf(history[i].first);
    post.second_index_[i] = builder.IndexOf(history[i].second);
    post.labels_[i] = history[i].label;
  }
  post.basis_ = builder.Release();
  const Eigen::Index n = static_cast<Eigen::Index>(post.basis_.size());
  post.basis_gram_ = Gram(dueling.base, post.basis_);
  post.theta_ = Eigen::VectorXd::Zero(t);
  post.basis_weights_ = Eigen::VectorXd::Zero(n);
  post.cov_factor_ = PsdFactor{};
  post.reduction_.resize(0, n);
  if (t == 0) return post;

  // N = D^T D.
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < t; ++i) {
    const Eigen::Index a = post.first_index_[i];
    const Eigen::Index b = post.second_index_[i];
    if (a == b) continue;
    laplacian(a, a) += 1.0;
    laplacian(b, b) += 1.0;
    laplacian(a, b) -= 1.0;
    laplacian(b, a) -= 1.0;
  }

  // Newton on L(theta). The step solves (lambda I + K W K) d = g with
  // K W K = D M D^T, M = G (D^T W D) G, via
  //   (lambda I + D M D^T)^{-1} = (I - D (lambda I + M N)^{-1} M D^T) / lambda.
  Eigen::VectorXd& theta = post.theta_;
  double loss = post.Loss(theta);
  post.loss_trace_.push_back(loss);
  Eigen::VectorXd grad = post.LossGradient(theta);
  double grad_norm = grad.norm();
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd h = post.PairMeans(theta);
    Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < t; ++i) {
      const Eigen::Index a = post.first_index_[i];
      const Eigen::Index b = post.second_index_[i];
      if (a == b) continue;
      const double w = LogisticDerivative(h[i]);
      weighted(a, a) += w;
      weighted(b, b) += w;
      weighted(a, b) -= w;
      weighted(b, a) -= w;
    }
    const Eigen::MatrixXd middle =
        post.basis_gram_ * weighted * post.basis_gram_;
    Eigen::MatrixXd system = middle * laplacian;
    system.diagonal().array() += lambda;
    const Eigen::VectorXd inner = system.partialPivLu().solve(
        middle * post.ApplyIncidenceT(grad));
    const Eigen::VectorXd step =
        (grad - post.ApplyIncidence(inner)) / lambda;

    if (grad_norm <= options.gradient_tolerance &&
        step.norm() <= options.step_tolerance) {
      break;
    }
    const double slope = grad.dot(step);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Eigen::VectorXd trial = theta - alpha * step;
      const double trial_loss = post.Loss(trial);
      if (trial_loss <= loss - 1e-4 * alpha * slope) {
        theta = trial;
        loss = trial_loss;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    post.loss_trace_.push_back(loss);
    grad = post.LossGradient(theta);
    grad_norm = grad.norm();
  }
  post.iterations_ = iter;
  post.gradient_norm_ = grad_norm;
  if (!(grad_norm <= options.failure_tolerance)) {
    throw Error(ErrorCode::kNoConvergence,
                "logistic fit stalled with gradient norm " +
                    std::to_string(grad_norm));
  }
  post.basis_weights_ = post.ApplyIncidenceT(theta);

  // R = S^{1/2} U^T from N = U S U^T, so that
  // D^T (c I + D G D^T)^{-1} D = R^T (c I + R G R^T)^{-1} R.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double cutoff = 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (values[j] > cutoff) kept.push_back(j);
  }
  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
  post.reduction_.resize(r, n);
  for (Eigen::Index j = 0; j < r; ++j) {
    post.reduction_.row(j) = std::sqrt(values[kept[j]]) *
                             eig.eigenvectors().col(kept[j]).transpose();
  }
  const double ridge = lambda * post.kappa_;
  Eigen::MatrixXd inner_cov =
      post.reduction_ * post.basis_gram_ * post.reduction_.transpose();
  inner_cov.diagonal().array() += ridge;
  post.cov_factor_ = FactorPsd(inner_cov);
  // det(I + K/c) = det(I_r + R G R^T / c).
  post.realized_gain_ =
      r == 0 ? 0.0 : 0.5 * (LogDetPsd(post.cov_factor_) - r * std::log(ridge));
  return post;
}

Eigen::VectorXd SamplePosterior(const PrefPosterior& posterior,
                                const CandidateSet& candidates,
                                const Point& anchor, double scale, Rng& rng) {
  if (candidates.size() == 0) {
    throw Error(ErrorCode::kEmptyData, "candidate set must be nonempty");
  }
  if (!(scale >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "exploration scale must be >= 0");
  }
  AnchoredMoments moments = posterior.Anchored(candidates.points(), anchor);
  moments.covariance *= scale * scale;
  return SampleMvn(moments.mean, moments.covariance, rng);
}

}  // namespace pfts
