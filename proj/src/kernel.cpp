/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qqbo {

namespace {

constexpr double kCoincidenceTol = 1e-12;

bool coincident(const MixedPoint& a, const MixedPoint& b) {
  if (a.z != b.z) return false;
  return (a.x - b.x).cwiseAbs().maxCoeff() <= kCoincidenceTol;
}

}  // namespace

long KernelParams::free_parameter_count(int p, const QualitativeSpace& space) {
  const int q = space.factor_count();
  long n_angles = 0;
  for (int mj : space.level_counts) n_angles += static_cast<long>(mj) * (mj - 1) / 2;
  return q + n_angles + static_cast<long>(p) * q;
}

void KernelParams::validate(int p, const QualitativeSpace& space) const {
  const int q = space.factor_count();
  if (sigma2.size() != q) throw std::invalid_argument("sigma2 has wrong length");
  if (theta.rows() != q || theta.cols() != p)
    throw std::invalid_argument("theta has wrong shape");
  if (static_cast<int>(angles.size()) != q)
    throw std::invalid_argument("angle list has wrong length");
  if ((sigma2.array() <= 0.0).any())
    throw std::invalid_argument("variance components must be positive");
  if (q > 0 && (theta.array() <= 0.0).any())
    throw std::invalid_argument("theta entries must be positive");
  for (int j = 0; j < q; ++j) {
    const int mj = space.level_counts[j];
    if (angles[j].size() != mj * (mj - 1) / 2)
      throw std::invalid_argument("angle count does not match level count");
  }
}

double gauss_corr(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                  const Eigen::VectorXd& theta_row) {
  if (x1.size() != x2.size() || x1.size() != theta_row.size())
    throw std::invalid_argument("gauss_corr: dimension mismatch");
  if ((theta_row.array() <= 0.0).any())
    throw std::invalid_argument("gauss_corr: theta must be strictly positive");
  double s = 0.0;
  for (Eigen::Index i = 0; i < x1.size(); ++i) {
    const double d = x1[i] - x2[i];
    s += theta_row[i] * d * d;
  }
  return std::exp(-s);
}

Eigen::MatrixXd hypersphere_cholesky(const Eigen::VectorXd& angles, int m) {
  if (m < 1) throw std::invalid_argument("hypersphere: m must be >= 1");
  if (angles.size() != static_cast<Eigen::Index>(m) * (m - 1) / 2)
    throw std::invalid_argument("hypersphere: wrong angle count");
  for (Eigen::Index k = 0; k < angles.size(); ++k) {
    if (!(angles[k] > 0.0 && angles[k] < std::numbers::pi))
      throw std::invalid_argument("hypersphere: angle outside (0, pi)");
  }

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  L(0, 0) = 1.0;
  Eigen::Index k = 0;
  for (int r = 1; r < m; ++r) {
    // Row r uses angles theta_{r,1..r}: running product of sines, one
    // cosine per column, pure sines on the diagonal.
    double sin_prod = 1.0;
    for (int s = 0; s < r; ++s) {
      L(r, s) = sin_prod * std::cos(angles[k + s]);
      sin_prod *= std::sin(angles[k + s]);
    }
    L(r, r) = sin_prod;
    k += r;
  }
  return L;
}

Eigen::MatrixXd hypersphere_to_corr(const Eigen::VectorXd& angles, int m) {
  const Eigen::MatrixXd L = hypersphere_cholesky(angles, m);
  return L * L.transpose();
}

MixedKernel::MixedKernel(KernelParams params, int p, const QualitativeSpace& space)
    : params_(std::move(params)) {
  params_.validate(p, space);
  corr_.reserve(space.factor_count());
  for (int j = 0; j < space.factor_count(); ++j) {
    corr_.push_back(hypersphere_to_corr(params_.angles[j], space.level_counts[j]));
  }
}

double MixedKernel::cross_cov(const MixedPoint& w1, const MixedPoint& w2) const {
  if (w1.x.size() != w2.x.size() || w1.z.size() != w2.z.size() ||
      static_cast<int>(w1.z.size()) != params_.sigma2.size() ||
      w1.x.size() != params_.theta.cols())
    throw std::invalid_argument("cross_cov: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index j = 0; j < params_.sigma2.size(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w1.x.size(); ++i) {
      const double d = w1.x[i] - w2.x[i];
      s += params_.theta(j, i) * d * d;
    }
    total += params_.sigma2[j] * corr_[j](w1.z[j] - 1, w2.z[j] - 1) * std::exp(-s);
  }
  return total;
}

Eigen::MatrixXd MixedKernel::cov_matrix(const std::vector<MixedPoint>& points,
                                        double jitter) const {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  if (n < 1) throw std::invalid_argument("cov_matrix: need at least one point");
  Eigen::MatrixXd phi(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    phi(s, s) = total_variance() + jitter;
    for (Eigen::Index t = s + 1; t < n; ++t) {
      const double v = cross_cov(points[s], points[t]);
      phi(s, t) = v;
      phi(t, s) = v;
    }
  }
  return phi;
}

Eigen::VectorXd MixedKernel::cov_vector(const MixedPoint& w0,
                                        const std::vector<MixedPoint>& points,
                                        double jitter) const {
  Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
  for (std::size_t t = 0; t < points.size(); ++t) {
    r[static_cast<Eigen::Index>(t)] =
        cross_cov(w0, points[t]) + (coincident(w0, points[t]) ? jitter : 0.0);
  }
  return r;
}

double cross_cov(const MixedPoint& w1, const MixedPoint& w2,
                 const KernelParams& params, const QualitativeSpace& space) {
  return MixedKernel(params, static_cast<int>(w1.x.size()), space).cross_cov(w1, w2);
}

Eigen::MatrixXd cov_matrix(const std::vector<MixedPoint>& points,
                           const KernelParams& params,
                           const QualitativeSpace& space, double jitter) {
  const int p = points.empty() ? 0 : static_cast<int>(points.front().x.size());
  return MixedKernel(params, p, space).cov_matrix(points, jitter);
}

}  // namespace qqbo
