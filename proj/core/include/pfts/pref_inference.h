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

#ifndef PFTS_PREF_INFERENCE_H_
#define PFTS_PREF_INFERENCE_H_

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pfts/kernels.h"
#include "pfts/numeric.h"
#include "pfts/rng.h"
#include "pfts/types.h"

namespace pfts {

// Logistic link mu(u) = 1 / (1 + exp(-u)). mu(0) = 1/2, mu(u) + mu(-u) = 1.
double Logistic(double u);
// mu'(u) = mu(u) (1 - mu(u)); bounded by kLinkLipschitz.
double LogisticDerivative(double u);
inline constexpr double kLinkLipschitz = 0.25;

// log(1 + exp(u)) without overflow.
double Softplus(double u);

// Since |f(x) - f(x')| <= 2B for a unit-normalized kernel, 1 / mu'(2B) bounds
// 1 / mu'(h(z)) uniformly.
double KappaFromNormBound(double norm_bound);

struct PreferenceRecord {
  Point first;
  Point second;
  int label = 0;  // 1 iff first is preferred.
};

// Append-only H_t.
class PreferenceHistory {
 public:
  // Throws kInvalidArgument unless label is 0 or 1 and the points share a
  // dimension with the existing records.
  void Append(Point first, Point second, int label);

  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<PreferenceRecord>& records() const { return records_; }
  const PreferenceRecord& operator[](size_t i) const { return records_[i]; }

 private:
  std::vector<PreferenceRecord> records_;
};

struct FitOptions {
  int max_iterations = 100;
  // Newton stops once both the gradient norm and the step norm are small.
  double gradient_tolerance = 1e-6;
  double step_tolerance = 1e-10;
  // Fitting fails with kNoConvergence above this gradient norm.
  double failure_tolerance = 1e-3;
  // Overrides kappa = 1 / mu'(2B).
  std::optional<double> kappa;
};

// Posterior quantities restricted to a candidate list against one anchor:
// mean_j = h_t(x_j, x0), covariance_jk = k_t^D((x_j, x0), (x_k, x0)).
struct AnchoredMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Fitted preference model: the logistic-loss minimizer h_t and the
// uncertainty proxy k_t^D built on (K_t^D + lambda kappa I).
//
// Every pair in the history is a difference of two points from a finite
// basis u_1..u_n (the distinct points seen so far), so K_t^D = D G D^T with
// D the t x n signed incidence matrix and G the base Gram on the basis. The
// Newton solves, variances and log-determinants are carried out in that
// n-dimensional space; the parameter vector theta stays t-dimensional.
class PrefPosterior {
 public:
  const Eigen::VectorXd& theta() const { return theta_; }
  double lambda() const { return lambda_; }
  double kappa() const { return kappa_; }
  double norm_bound() const { return norm_bound_; }
  const DuelingKernel& dueling() const { return dueling_; }
  const PreferenceHistory& history() const { return history_; }
  size_t rounds() const { return history_.size(); }

  double gradient_norm() const { return gradient_norm_; }
  int iterations() const { return iterations_; }
  // Regularized loss after each accepted Newton step (initial value first).
  const std::vector<double>& loss_trace() const { return loss_trace_; }

  // h_t(z) = sum_i theta_i k^D(z, z_i).
  double Mean(const PointPair& z) const;
  // g_t(x) with h_t(x, x') = g_t(x) - g_t(x').
  double UtilityMean(const Point& x) const;
  // k_t^D(z1, z2).
  double Covariance(const PointPair& z1, const PointPair& z2) const;
  // sigma_t(z), with negative variances clamped to zero.
  double StdDev(const PointPair& z) const;

  AnchoredMoments Anchored(std::span<const Point> candidates,
                           const Point& anchor) const;

  // 1/2 log det(I + (lambda kappa)^{-1} K_t^D) over the played pairs.
  double InformationGain() const { return realized_gain_; }

  // 4B + 2 sqrt((2 kappa / lambda) (gain + log(1/delta))).
  double Beta(double delta) const;

  // Regularized logistic loss and its gradient in parameter space.
  double Loss(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd LossGradient(const Eigen::VectorXd& theta) const;

  // Dense K_t^D (t x t), for diagnostics and tests.
  Eigen::MatrixXd DuelingGram() const;

 private:
  friend PrefPosterior FitPreferencePosterior(const PreferenceHistory&,
                                              const DuelingKernel&, double,
                                              double, const FitOptions&);

  Eigen::VectorXd ApplyIncidence(const Eigen::VectorXd& basis_values) const;
  Eigen::VectorXd ApplyIncidenceT(const Eigen::VectorXd& pair_values) const;
  Eigen::VectorXd PairMeans(const Eigen::VectorXd& theta) const;
  // [k(u_i, x) - k(u_i, x')]_i
  Eigen::VectorXd BasisContrast(const PointPair& z) const;

  PreferenceHistory history_;
  DuelingKernel dueling_;
  double lambda_ = 0.0;
  double kappa_ = 0.0;
  double norm_bound_ = 0.0;

  std::vector<Point> basis_;
  std::vector<Eigen::Index> first_index_;
  std::vector<Eigen::Index> second_index_;
  Eigen::VectorXd labels_;
  Eigen::MatrixXd basis_gram_;

  Eigen::VectorXd theta_;
  Eigen::VectorXd basis_weights_;  // D^T theta
  // R with R^T R = D^T D (zero-eigenvalue directions dropped).
  Eigen::MatrixXd reduction_;
  // Factor of lambda kappa I + R G R^T.
  PsdFactor cov_factor_;
  double realized_gain_ = 0.0;

  double gradient_norm_ = 0.0;
  int iterations_ = 0;
  std::vector<double> loss_trace_;
};

// Damped Newton from theta = 0 with Armijo step halving. Throws
// kInvalidArgument for lambda <= 0 or norm_bound < 0, kNoConvergence.
PrefPosterior FitPreferencePosterior(const PreferenceHistory& history,
                                     const DuelingKernel& dueling,
                                     double lambda, double norm_bound,
                                     const FitOptions& options = {});

// Draws {h~(x, x0) : x in candidates} from GP(h_t, v^2 k_t^D) and returns
// it as the utility sample f~(x) = h~(x, x0).
Eigen::VectorXd SamplePosterior(const PrefPosterior& posterior,
                                const CandidateSet& candidates,
                                const Point& anchor, double scale, Rng& rng);

}  // namespace pfts

#endif  // PFTS_PREF_INFERENCE_H_
