/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_MODEL_HPP
#define QQBO_MODEL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <vector>

#include "qqbo/domain.hpp"
#include "qqbo/kernel.hpp"

namespace qqbo {

/// Observed design points with their responses.
struct Dataset {
  std::vector<MixedPoint> points;
  Eigen::VectorXd y;

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;  // equal lengths, n >= 1, finite responses

  /// Sample variance of y (1 for n < 2), floored away from zero; used to
  /// scale the variance-component bounds.
  double response_variance() const;
};

struct FitConfig {
  int n_starts = 5;
  long max_iters = 0;        ///< objective evaluations per start; 0 -> 600*dim
  double tolerance = 1e-6;   ///< relative log-likelihood convergence
  double theta_lo = 1e-3;
  double theta_hi = 1e3;
  double sigma2_lo_factor = 1e-8;  ///< x var(y)
  double sigma2_hi_factor = 1e3;   ///< x var(y)
  std::uint64_t rng_seed = 0;
};

/// Posterior normal at a query point.
struct PredictiveDist {
  double mean = 0.0;
  double sd = 0.0;
};

/// Relative jitter added to the covariance diagonal (x total variance).
inline constexpr double kJitterFactor = 1e-6;

/// Maps between KernelParams and the unconstrained vector the optimizer
/// sees: log scale for variances and length-scales (clamped to their
/// bounds on decode), affine-sigmoid onto (0, pi) for the angles.
Eigen::VectorXd to_free_vector(const KernelParams& params, const FitConfig& config,
                               double var_y);
KernelParams from_free_vector(const Eigen::VectorXd& t, int p,
                              const QualitativeSpace& space,
                              const FitConfig& config, double var_y);

/// Profiled mean given a factored covariance: (1' Phi^-1 y) / (1' Phi^-1 1).
double profile_mu(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::VectorXd& y);

/// Reduced (mean-profiled) negative log-likelihood objective
///   log|Phi| + y' Phi^-1 y - (1' Phi^-1 y)^2 / (1' Phi^-1 1),
/// evaluated at the decoded free-parameter vector. Throws NumericalFailure
/// when the covariance cannot be factored even after jitter escalation.
double neg_log_likelihood(const Eigen::VectorXd& free_params, const Dataset& data,
                          const QualitativeSpace& space, const FitConfig& config);

/// Fitted additive Gaussian process surrogate. Immutable after fit();
/// concurrent predict() calls are safe.
class AgpModel {
public:
  /// Maximum-likelihood fit, best of n_starts local optimizations. The
  /// first start is sigma2_j = var(y)/q, theta = 1, angles = pi/2; a warm
  /// start, when given, is added as an extra start.
  static AgpModel fit(const Dataset& data, const QualitativeSpace& space,
                      const FitConfig& config = {},
                      const KernelParams* warm_start = nullptr);

  /// Condition on the data at fixed, known kernel parameters (profiled
  /// mean). No optimization.
  static AgpModel with_params(const Dataset& data, const QualitativeSpace& space,
                              const KernelParams& params);

  PredictiveDist predict(const MixedPoint& w0) const;

  const KernelParams& params() const { return kernel_->params(); }
  const MixedKernel& kernel() const { return *kernel_; }
  const Dataset& data() const { return data_; }
  const QualitativeSpace& space() const { return space_; }
  double mu_hat() const { return mu_hat_; }
  double jitter() const { return jitter_; }
  double log_likelihood() const { return log_likelihood_; }
  double prior_variance() const { return kernel_->total_variance(); }

  Eigen::MatrixXd chol_lower() const { return llt_.matrixL(); }
  const Eigen::VectorXd& weights() const { return weights_; }

private:
  AgpModel() = default;

  std::shared_ptr<const MixedKernel> kernel_;
  Dataset data_;
  QualitativeSpace space_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd weights_;  ///< Phi^-1 (y - mu 1)
  double mu_hat_ = 0.0;
  double jitter_ = 0.0;
  double log_likelihood_ = 0.0;
};

}  // namespace qqbo

#endif
