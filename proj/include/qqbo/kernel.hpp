/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_KERNEL_HPP
#define QQBO_KERNEL_HPP

#include <Eigen/Core>

#include <vector>

#include "qqbo/domain.hpp"

namespace qqbo {

/// Parameters of the additive mixed-input covariance
///
///   phi(w1, w2) = sum_j sigma2jj * T^(j)[z1j, z2j] * exp(-sum_i theta(j,i) (x1i - x2i)^2)
///
/// with one variance component, one level-correlation matrix (encoded by
/// hypersphere angles) and one row of inverse squared length-scales per
/// qualitative factor. theta lives on the unit-scale coordinates.
struct KernelParams {
  Eigen::VectorXd sigma2;               ///< q variance components, > 0
  Eigen::MatrixXd theta;                ///< q x p, > 0
  std::vector<Eigen::VectorXd> angles;  ///< per factor: m_j(m_j-1)/2 angles in (0, pi)

  double total_variance() const { return sigma2.sum(); }

  /// Number of free parameters excluding the mean:
  /// q + sum_j m_j(m_j-1)/2 + p*q.
  static long free_parameter_count(int p, const QualitativeSpace& space);

  /// Consistency with a (p, space) shape; throws std::invalid_argument.
  void validate(int p, const QualitativeSpace& space) const;
};

/// Gaussian correlation exp{-sum_i theta_i (x1i - x2i)^2}. Symmetric, equals
/// one exactly when x1 == x2, strictly below one otherwise (theta > 0).
double gauss_corr(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                  const Eigen::VectorXd& theta_row);

/// Unit-row-norm lower-triangular factor L of the hypersphere
/// parameterization: l_{1,1} = 1 and row r is the spherical-coordinate image
/// of the angles (theta_{r,1}, ..., theta_{r,r-1}), each in (0, pi).
Eigen::MatrixXd hypersphere_cholesky(const Eigen::VectorXd& angles, int m);

/// T = L L^T: symmetric positive definite with unit diagonal.
Eigen::MatrixXd hypersphere_to_corr(const Eigen::VectorXd& angles, int m);

/// Precomputed form of KernelParams with the level-correlation matrices
/// expanded. Immutable; safe to share across threads.
class MixedKernel {
public:
  MixedKernel(KernelParams params, int p, const QualitativeSpace& space);

  double cross_cov(const MixedPoint& w1, const MixedPoint& w2) const;

  /// n x n covariance of a point list with `jitter` added to the diagonal.
  Eigen::MatrixXd cov_matrix(const std::vector<MixedPoint>& points,
                             double jitter) const;

  /// Covariances between one query and a point list. When the query
  /// coincides with a stored point (same levels, identical x within 1e-12)
  /// the jitter is included, so a nugget model interpolates exactly.
  Eigen::VectorXd cov_vector(const MixedPoint& w0,
                             const std::vector<MixedPoint>& points,
                             double jitter) const;

  const KernelParams& params() const { return params_; }
  const Eigen::MatrixXd& level_corr(int j) const { return corr_[j]; }
  double total_variance() const { return params_.sigma2.sum(); }

private:
  KernelParams params_;
  std::vector<Eigen::MatrixXd> corr_;  ///< T^(j) per factor
};

/// Convenience wrappers matching the one-shot call style.
double cross_cov(const MixedPoint& w1, const MixedPoint& w2,
                 const KernelParams& params, const QualitativeSpace& space);
Eigen::MatrixXd cov_matrix(const std::vector<MixedPoint>& points,
                           const KernelParams& params,
                           const QualitativeSpace& space, double jitter);

}  // namespace qqbo

#endif
