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

#include "pfts/kernels.h"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "pfts/error.h"

namespace pfts {

void BaseKernel::Validate() const {
  if (!(lengthscale > 0.0) || !(signal_variance > 0.0) ||
      (family == KernelFamily::kMatern && !(nu > 0.0))) {
    throw Error(ErrorCode::kInvalidArgument,
                "kernel parameters must be positive");
  }
}

double BaseKernel::OfDistance(double r) const {
  if (family == KernelFamily::kSquaredExponential) {
    const double s = r / lengthscale;
    return signal_variance * std::exp(-0.5 * s * s);
  }
  if (r == 0.0) return signal_variance;
  // Closed forms for the half-integer smoothness values.
  if (nu == 0.5) {
    return signal_variance * std::exp(-r / lengthscale);
  }
  if (nu == 1.5) {
    const double s = std::sqrt(3.0) * r / lengthscale;
    return signal_variance * (1.0 + s) * std::exp(-s);
  }
  if (nu == 2.5) {
    const double s = std::sqrt(5.0) * r / lengthscale;
    return signal_variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
  }
  const double s = std::sqrt(2.0 * nu) * r / lengthscale;
  if (s > 700.0) return 0.0;
  return signal_variance * std::pow(2.0, 1.0 - nu) / std::tgamma(nu) *
         std::pow(s, nu) * std::cyl_bessel_k(nu, s);
}

double BaseKernel::operator()(const Point& x, const Point& u) const {
  return OfDistance((x - u).norm());
}

double EvalBase(const BaseKernel& kernel, const Point& x, const Point& u) {
  if (x.size() != u.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "points have dimensions " + std::to_string(x.size()) +
                    " and " + std::to_string(u.size()));
  }
  return kernel(x, u);
}

double DuelingKernel::operator()(const PointPair& z1,
                                 const PointPair& z2) const {
  // Grouped so that (x, x) and (u, u) give exactly 0.
  return (base(z1.first, z2.first) - base(z1.second, z2.first)) -
         (base(z1.first, z2.second) - base(z1.second, z2.second));
}

double EvalDueling(const DuelingKernel& kernel, const PointPair& z1,
                   const PointPair& z2) {
  const Eigen::Index d = z1.first.size();
  if (z1.second.size() != d || z2.first.size() != d ||
      z2.second.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pair points have unequal dimensions");
  }
  return kernel(z1, z2);
}

Eigen::MatrixXd Gram(const BaseKernel& kernel, std::span<const Point> points) {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = EvalBase(kernel, points[i], points[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      gram(i, j) = gram(j, i) = EvalBase(kernel, points[i], points[j]);
    }
  }
  return gram;
}

Eigen::MatrixXd Gram(const DuelingKernel& kernel,
                     std::span<const PointPair> pairs) {
  const Eigen::Index n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = EvalDueling(kernel, pairs[i], pairs[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      gram(i, j) = gram(j, i) = EvalDueling(kernel, pairs[i], pairs[j]);
    }
  }
  return gram;
}

Eigen::MatrixXd CrossGram(const BaseKernel& kernel, std::span<const Point> a,
                          std::span<const Point> b) {
  Eigen::MatrixXd out(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      out(i, j) = EvalBase(kernel, a[i], b[j]);
    }
  }
  return out;
}

double RkhsSample::operator()(const Point& x) const {
  double value = 0.0;
  for (size_t j = 0; j < centers.size(); ++j) {
    value += weights[j] * EvalBase(base, x, centers[j]);
  }
  return value;
}

double RkhsSample::NormSquared() const {
  const Eigen::MatrixXd gram = Gram(base, centers);
  return weights.dot(gram * weights);
}

RkhsSample DrawRkhsSample(const BaseKernel& kernel, const CandidateSet& grid,
                          double target_norm, Rng& rng) {
  kernel.Validate();
  if (grid.size() == 0) {
    throw Error(ErrorCode::kEmptyData, "grid must be nonempty");
  }
  if (!(target_norm >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "norm bound must be >= 0");
  }
  RkhsSample sample;
  sample.centers = grid.points();
  sample.base = kernel;
  sample.norm_bound = target_norm;
  sample.weights.resize(grid.size());
  for (Eigen::Index j = 0; j < sample.weights.size(); ++j) {
    sample.weights[j] = rng.Normal();
  }
  const double squared = sample.NormSquared();
  if (target_norm == 0.0) {
    sample.weights.setZero();
  } else if (squared > 0.0) {
    sample.weights *= target_norm / std::sqrt(squared);
  } else {
    throw Error(ErrorCode::kNotPsd, "degenerate Gram matrix for RKHS draw");
  }
  return sample;
}

MercerSpectrum MercerTruncation(const BaseKernel& kernel,
                                const CandidateSet& grid, int m) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  if (m < 0 || m > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "truncation level exceeds grid size");
  }
  const Eigen::MatrixXd scaled = Gram(kernel, grid.points()) / double(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled);
  MercerSpectrum out;
  out.eigenvalues.resize(m);
  out.eigenfunctions.resize(n, m);
  // Eigen returns ascending order.
  for (int j = 0; j < m; ++j) {
    out.eigenvalues[j] = eig.eigenvalues()[n - 1 - j];
    out.eigenfunctions.col(j) = eig.eigenvectors().col(n - 1 - j);
  }
  return out;
}

}  // namespace pfts
