/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qqbo/errors.hpp"
#include "qqbo/optimize.hpp"
#include "qqbo/rng.hpp"

namespace qqbo {

namespace {

constexpr double kAngleMargin = 1e-6;  // clamp angles to [margin, pi - margin]
constexpr int kMaxJitterEscalations = 3;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double logit(double u) { return std::log(u / (1.0 - u)); }
double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

struct FactoredLikelihood {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double objective;  // log|Phi| + quad - profiled term
  double mu_hat;
  double jitter;
  Eigen::VectorXd weights;  // Phi^-1 (y - mu 1)
};

/// Factor Phi + jitter*I, escalating the jitter x10 on Cholesky failure,
/// and evaluate the profiled likelihood pieces.
FactoredLikelihood factor_and_evaluate(const MixedKernel& kernel,
                                       const std::vector<MixedPoint>& points,
                                       const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  double jitter = kJitterFactor * kernel.total_variance();
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (int attempt = 0;; ++attempt) {
    llt.compute(kernel.cov_matrix(points, jitter));
    if (llt.info() == Eigen::Success) break;
    if (attempt >= kMaxJitterEscalations)
      throw NumericalFailure("covariance factorization failed after jitter escalation");
    jitter *= 10.0;
  }

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd phi_inv_y = llt.solve(y);
  const Eigen::VectorXd phi_inv_1 = llt.solve(ones);
  const double one_phi_y = ones.dot(phi_inv_y);
  const double one_phi_1 = ones.dot(phi_inv_1);
  if (!(one_phi_1 > 0.0) || !std::isfinite(one_phi_1))
    throw NumericalFailure("profiled mean is undefined (singular covariance)");

  double log_det = 0.0;
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(L(i, i));

  FactoredLikelihood out;
  out.mu_hat = one_phi_y / one_phi_1;
  out.objective = log_det + y.dot(phi_inv_y) - one_phi_y * one_phi_y / one_phi_1;
  out.jitter = jitter;
  out.weights = phi_inv_y - out.mu_hat * phi_inv_1;
  out.llt = std::move(llt);
  return out;
}

}  // namespace

void Dataset::validate() const {
  if (points.empty()) throw std::invalid_argument("dataset is empty");
  if (static_cast<Eigen::Index>(points.size()) != y.size())
    throw std::invalid_argument("points and responses differ in length");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) throw std::invalid_argument("non-finite response");
  }
  for (const auto& w : points) {
    if (w.x.size() != points.front().x.size() || w.z.size() != points.front().z.size())
      throw std::invalid_argument("points have inconsistent dimensions");
  }
}

double Dataset::response_variance() const {
  const Eigen::Index n = y.size();
  if (n < 2) return 1.0;
  const double mean = y.mean();
  const double ss = (y.array() - mean).square().sum();
  return std::max(ss / static_cast<double>(n - 1), 1e-12);
}

Eigen::VectorXd to_free_vector(const KernelParams& params, const FitConfig& config,
                               double var_y) {
  const double s_lo = config.sigma2_lo_factor * var_y;
  const double s_hi = config.sigma2_hi_factor * var_y;
  const int q = static_cast<int>(params.sigma2.size());
  const int p = static_cast<int>(params.theta.cols());

  long n_angles = 0;
  for (const auto& a : params.angles) n_angles += a.size();

  Eigen::VectorXd t(q + n_angles + static_cast<long>(p) * q);
  long k = 0;
  for (int j = 0; j < q; ++j) t[k++] = std::log(clamp(params.sigma2[j], s_lo, s_hi));
  for (const auto& a : params.angles) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double u = clamp(a[i] / std::numbers::pi, 1e-9, 1.0 - 1e-9);
      t[k++] = logit(u);
    }
  }
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < p; ++i)
      t[k++] = std::log(clamp(params.theta(j, i), config.theta_lo, config.theta_hi));
  return t;
}

KernelParams from_free_vector(const Eigen::VectorXd& t, int p,
                              const QualitativeSpace& space,
                              const FitConfig& config, double var_y) {
  const int q = space.factor_count();
  if (t.size() != KernelParams::free_parameter_count(p, space))
    throw std::invalid_argument("free-parameter vector has wrong length");
  const double s_lo = config.sigma2_lo_factor * var_y;
  const double s_hi = config.sigma2_hi_factor * var_y;

  KernelParams params;
  params.sigma2.resize(q);
  params.theta.resize(q, p);
  params.angles.resize(q);
  long k = 0;
  for (int j = 0; j < q; ++j) params.sigma2[j] = clamp(std::exp(t[k++]), s_lo, s_hi);
  for (int j = 0; j < q; ++j) {
    const int mj = space.level_counts[j];
    Eigen::VectorXd a(mj * (mj - 1) / 2);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a[i] = clamp(std::numbers::pi * sigmoid(t[k++]), kAngleMargin,
                   std::numbers::pi - kAngleMargin);
    }
    params.angles[j] = std::move(a);
  }
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < p; ++i)
      params.theta(j, i) = clamp(std::exp(t[k++]), config.theta_lo, config.theta_hi);
  return params;
}

double profile_mu(const Eigen::LLT<Eigen::MatrixXd>& chol, const Eigen::VectorXd& y) {
  if (chol.info() != Eigen::Success)
    throw NumericalFailure("profile_mu: covariance factor is not valid");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
  const double denom = ones.dot(chol.solve(ones));
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw NumericalFailure("profile_mu: singular covariance");
  return ones.dot(chol.solve(y)) / denom;
}

double neg_log_likelihood(const Eigen::VectorXd& free_params, const Dataset& data,
                          const QualitativeSpace& space, const FitConfig& config) {
  data.validate();
  const int p = static_cast<int>(data.points.front().x.size());
  const KernelParams params =
      from_free_vector(free_params, p, space, config, data.response_variance());
  const MixedKernel kernel(params, p, space);
  return factor_and_evaluate(kernel, data.points, data.y).objective;
}

AgpModel AgpModel::with_params(const Dataset& data, const QualitativeSpace& space,
                               const KernelParams& params) {
  data.validate();
  const int p = static_cast<int>(data.points.front().x.size());
  AgpModel model;
  model.space_ = space;
  model.data_ = data;
  model.kernel_ = std::make_shared<const MixedKernel>(params, p, space);
  FactoredLikelihood fl = factor_and_evaluate(*model.kernel_, data.points, data.y);
  model.llt_ = std::move(fl.llt);
  model.mu_hat_ = fl.mu_hat;
  model.jitter_ = fl.jitter;
  model.weights_ = std::move(fl.weights);
  model.log_likelihood_ =
      -0.5 * (data.size() * std::log(2.0 * std::numbers::pi) + fl.objective);
  return model;
}

AgpModel AgpModel::fit(const Dataset& data, const QualitativeSpace& space,
                       const FitConfig& config, const KernelParams* warm_start) {
  data.validate();
  const int p = static_cast<int>(data.points.front().x.size());
  const int q = space.factor_count();
  const double var_y = data.response_variance();
  const long dim = KernelParams::free_parameter_count(p, space);

  auto objective = [&](const Eigen::VectorXd& t) -> double {
    try {
      const KernelParams params = from_free_vector(t, p, space, config, var_y);
      const MixedKernel kernel(params, p, space);
      return factor_and_evaluate(kernel, data.points, data.y).objective;
    } catch (const NumericalFailure&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  // Start 1: equal variance split, unit length-scales, uncorrelated levels.
  KernelParams base;
  base.sigma2 = Eigen::VectorXd::Constant(q, var_y / std::max(q, 1));
  base.theta = Eigen::MatrixXd::Ones(q, p);
  base.angles.resize(q);
  for (int j = 0; j < q; ++j) {
    base.angles[j] = Eigen::VectorXd::Constant(
        space.level_counts[j] * (space.level_counts[j] - 1) / 2, std::numbers::pi / 2);
  }

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(to_free_vector(base, config, var_y));
  if (warm_start != nullptr) starts.push_back(to_free_vector(*warm_start, config, var_y));

  auto rng = make_engine(config.rng_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double ls_lo = std::log(config.sigma2_lo_factor * var_y);
  const double ls_hi = std::log(config.sigma2_hi_factor * var_y);
  const double lt_lo = std::log(config.theta_lo);
  const double lt_hi = std::log(config.theta_hi);
  while (static_cast<int>(starts.size()) < config.n_starts + (warm_start ? 1 : 0)) {
    KernelParams rp = base;
    for (int j = 0; j < q; ++j) rp.sigma2[j] = std::exp(ls_lo + (ls_hi - ls_lo) * unif(rng));
    for (int j = 0; j < q; ++j)
      for (int i = 0; i < p; ++i)
        rp.theta(j, i) = std::exp(lt_lo + (lt_hi - lt_lo) * unif(rng));
    for (int j = 0; j < q; ++j) {
      for (Eigen::Index i = 0; i < rp.angles[j].size(); ++i)
        rp.angles[j][i] = kAngleMargin +
                          (std::numbers::pi - 2 * kAngleMargin) * unif(rng);
    }
    starts.push_back(to_free_vector(rp, config, var_y));
  }

  NelderMeadOptions nm;
  nm.max_evaluations = config.max_iters > 0 ? config.max_iters : 600L * dim;
  nm.f_tolerance = config.tolerance;

  Eigen::VectorXd best_t;
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    const MinimizeResult res = nelder_mead(objective, start, nm);
    if (res.value < best_obj) {
      best_obj = res.value;
      best_t = res.x;
    }
  }
  if (!std::isfinite(best_obj)) {
    std::ostringstream msg;
    msg << "all " << starts.size() << " fit starts failed numerically (n=" << data.size()
        << ", q=" << q << ", p=" << p << ")";
    throw FitFailure(msg.str());
  }

  AgpModel model;
  model.space_ = space;
  model.data_ = data;
  const KernelParams params = from_free_vector(best_t, p, space, config, var_y);
  model.kernel_ = std::make_shared<const MixedKernel>(params, p, space);
  FactoredLikelihood fl = factor_and_evaluate(*model.kernel_, data.points, data.y);
  model.llt_ = std::move(fl.llt);
  model.mu_hat_ = fl.mu_hat;
  model.jitter_ = fl.jitter;
  model.weights_ = std::move(fl.weights);
  model.log_likelihood_ =
      -0.5 * (data.size() * std::log(2.0 * std::numbers::pi) + fl.objective);
  return model;
}

PredictiveDist AgpModel::predict(const MixedPoint& w0) const {
  if (w0.x.size() != data_.points.front().x.size() ||
      w0.z.size() != data_.points.front().z.size())
    throw std::invalid_argument("predict: query dimension mismatch");

  const Eigen::VectorXd r0 = kernel_->cov_vector(w0, data_.points, jitter_);
  PredictiveDist out;
  out.mean = mu_hat_ + r0.dot(weights_);
  const double total = kernel_->total_variance();
  double var = total - r0.dot(llt_.solve(r0));
  var = std::min(std::max(var, 0.0), total);
  out.sd = std::sqrt(var);
  return out;
}

}  // namespace qqbo
