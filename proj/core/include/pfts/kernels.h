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

#ifndef PFTS_KERNELS_H_
#define PFTS_KERNELS_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "pfts/rng.h"
#include "pfts/types.h"

namespace pfts {

enum class KernelFamily { kSquaredExponential, kMatern };

// Stationary kernel on X. k(x, x) = signal_variance; with signal_variance 1
// the kernel is bounded by 1.
struct BaseKernel {
  KernelFamily family = KernelFamily::kMatern;
  double lengthscale = 0.1;
  double nu = 2.5;  // Matern only.
  double signal_variance = 1.0;

  // Throws kInvalidArgument for nonpositive parameters.
  void Validate() const;

  // Kernel value as a function of the Euclidean distance r >= 0.
  double OfDistance(double r) const;

  double operator()(const Point& x, const Point& u) const;
};

// Throws kDimensionMismatch if x and u differ in dimension.
double EvalBase(const BaseKernel& kernel, const Point& x, const Point& u);

// k^D((x, x'), (u, u')) = k(x, u) + k(x', u') - k(x, u') - k(x', u).
struct DuelingKernel {
  BaseKernel base;

  double operator()(const PointPair& z1, const PointPair& z2) const;
};

double EvalDueling(const DuelingKernel& kernel, const PointPair& z1,
                   const PointPair& z2);

Eigen::MatrixXd Gram(const BaseKernel& kernel, std::span<const Point> points);
Eigen::MatrixXd Gram(const DuelingKernel& kernel,
                     std::span<const PointPair> pairs);
// [k(a_i, b_j)]_{ij}
Eigen::MatrixXd CrossGram(const BaseKernel& kernel, std::span<const Point> a,
                          std::span<const Point> b);

// f(x) = sum_j weights_j k(x, centers_j), with ||f||_H^2 = w^T K w.
struct RkhsSample {
  std::vector<Point> centers;
  Eigen::VectorXd weights;
  BaseKernel base;
  double norm_bound = 0.0;

  double operator()(const Point& x) const;
  double NormSquared() const;
};

// Weights drawn i.i.d. N(0, 1) over the grid points, then rescaled so that
// the RKHS norm equals target_norm exactly.
RkhsSample DrawRkhsSample(const BaseKernel& kernel, const CandidateSet& grid,
                          double target_norm, Rng& rng);

// Empirical Mercer decomposition: top-m eigenpairs of Gram / |grid|, sorted
// descending. Column j of eigenfunctions holds the unit eigenvector, so
// sum_j gamma_j phi_j phi_j^T reconstructs Gram / |grid| when m = |grid|.
struct MercerSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfunctions;
};

MercerSpectrum MercerTruncation(const BaseKernel& kernel,
                                const CandidateSet& grid, int m);

}  // namespace pfts

#endif  // PFTS_KERNELS_H_
