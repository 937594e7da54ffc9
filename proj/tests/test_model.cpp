/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "qqbo/errors.hpp"
#include "qqbo/model.hpp"
#include "test_helpers.hpp"

using namespace qqbo;

namespace {

Dataset random_dataset(int n, int p, const QualitativeSpace& space,
                       std::mt19937_64& rng) {
  Dataset data;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    data.points.push_back(testing::random_point(p, space, rng));
  data.y.resize(n);
  for (int i = 0; i < n; ++i) data.y[i] = normal(rng);
  return data;
}

/// Reduced objective computed with an explicit dense inverse.
double dense_objective(const KernelParams& params, const Dataset& data,
                       const QualitativeSpace& space, double jitter) {
  const Eigen::MatrixXd phi = cov_matrix(data.points, params, space, jitter);
  const Eigen::MatrixXd inv = phi.inverse();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(data.size());
  const double log_det = std::log(phi.determinant());
  const double quad = data.y.dot(inv * data.y);
  const double one_y = ones.dot(inv * data.y);
  const double one_one = ones.dot(inv * ones);
  return log_det + quad - one_y * one_y / one_one;
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("profile_mu closed form") {
  QualitativeSpace space;
  space.level_counts = {3};
  std::mt19937_64 rng(41);
  const KernelParams params = testing::random_params(2, space, rng);
  const MixedKernel kernel(params, 2, space);
  std::vector<MixedPoint> points;
  for (int i = 0; i < 6; ++i) points.push_back(testing::random_point(2, space, rng));
  const Eigen::MatrixXd phi = kernel.cov_matrix(points, 1e-8);
  Eigen::LLT<Eigen::MatrixXd> llt(phi);

  SUBCASE("constant responses profile to the constant") {
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 3.25);
    CHECK(profile_mu(llt, y) == doctest::Approx(3.25).epsilon(1e-10));
  }

  SUBCASE("identity covariance profiles to the sample mean") {
    Eigen::LLT<Eigen::MatrixXd> id(Eigen::MatrixXd::Identity(6, 6));
    Eigen::VectorXd y(6);
    y << 1.0, -2.0, 0.5, 4.0, 2.5, -1.25;
    CHECK(profile_mu(id, y) == doctest::Approx(y.mean()).epsilon(1e-12));
  }

  SUBCASE("matches a scalar search of the exact log-likelihood") {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd y(6);
    for (int i = 0; i < 6; ++i) y[i] = 2.0 + normal(rng);

    auto neg_loglik_mu = [&](double mu) {
      const Eigen::VectorXd r = y - Eigen::VectorXd::Constant(6, mu);
      return 0.5 * r.dot(llt.solve(r));
    };
    // Dense scan plus refinement around the best cell.
    double best_mu = 0.0, best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20000; ++k) {
      const double mu = -10.0 + 20.0 * k / 20000.0;
      const double v = neg_loglik_mu(mu);
      if (v < best_v) {
        best_v = v;
        best_mu = mu;
      }
    }
    CHECK(profile_mu(llt, y) == doctest::Approx(best_mu).epsilon(1e-3));
    CHECK(neg_loglik_mu(profile_mu(llt, y)) <= best_v + 1e-12);
  }
}

TEST_CASE("neg_log_likelihood with a single observation") {
  QualitativeSpace space;
  space.level_counts = {2};
  Dataset data;
  data.points.push_back({Eigen::VectorXd::Constant(1, 0.4), {1}});
  data.y = Eigen::VectorXd::Constant(1, 7.5);

  FitConfig config;
  KernelParams params;
  params.sigma2 = Eigen::VectorXd::Constant(1, 1.3);
  params.theta = Eigen::MatrixXd::Constant(1, 1, 2.0);
  params.angles = {Eigen::VectorXd::Constant(1, std::numbers::pi / 2)};
  const Eigen::VectorXd t = to_free_vector(params, config, data.response_variance());

  const double total = 1.3 * (1.0 + kJitterFactor);
  CHECK(neg_log_likelihood(t, data, space, config) ==
        doctest::Approx(std::log(total)).epsilon(1e-10));
}

TEST_CASE("neg_log_likelihood agrees with the dense-inverse oracle") {
  std::mt19937_64 rng(17);
  FitConfig config;
  for (int trial = 0; trial < 8; ++trial) {
    QualitativeSpace space;
    space.level_counts = {2 + trial % 2, 3};
    const int p = 1 + trial % 3;
    const int n = 4 + trial % 5;
    const Dataset data = random_dataset(n, p, space, rng);
    const KernelParams params = testing::random_params(p, space, rng);
    const Eigen::VectorXd t = to_free_vector(params, config, data.response_variance());
    const KernelParams decoded =
        from_free_vector(t, p, space, config, data.response_variance());

    const double jitter = kJitterFactor * decoded.sigma2.sum();
    const double expected = dense_objective(decoded, data, space, jitter);
    CHECK(neg_log_likelihood(t, data, space, config) ==
          doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("neg_log_likelihood is invariant under level relabeling") {
  QualitativeSpace space;
  space.level_counts = {3};
  std::mt19937_64 rng(29);
  FitConfig config;
  const Dataset data = random_dataset(7, 1, space, rng);
  const KernelParams params = testing::random_params(1, space, rng);

  const int perm[3] = {2, 0, 1};
  Dataset relabeled = data;
  for (auto& w : relabeled.points) w.z[0] = perm[w.z[0] - 1] + 1;
  const Eigen::MatrixXd corr = hypersphere_to_corr(params.angles[0], 3);
  Eigen::MatrixXd permuted(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) permuted(perm[r], perm[s]) = corr(r, s);
  KernelParams perm_params = params;
  perm_params.angles[0] = testing::angles_from_corr(permuted);

  const double var = data.response_variance();
  const double v1 =
      neg_log_likelihood(to_free_vector(params, config, var), data, space, config);
  const double v2 = neg_log_likelihood(to_free_vector(perm_params, config, var),
                                       relabeled, space, config);
  CHECK(v1 == doctest::Approx(v2).epsilon(1e-8));
}

TEST_CASE("free-parameter vector length matches the counting formula") {
  std::mt19937_64 rng(59);
  FitConfig config;
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 1 + trial % 4;
    const int q = 1 + trial % 3;
    QualitativeSpace space;
    long expected = q + static_cast<long>(p) * q;
    for (int j = 0; j < q; ++j) {
      const int m = 2 + static_cast<int>(rng() % 4);
      space.level_counts.push_back(m);
      expected += m * (m - 1) / 2;
    }
    CHECK(KernelParams::free_parameter_count(p, space) == expected);
    const KernelParams params = testing::random_params(p, space, rng);
    CHECK(to_free_vector(params, config, 1.0).size() == expected);
  }
}

TEST_CASE("with_params predict matches a hand-built 2x2 inverse") {
  QualitativeSpace space;
  space.level_counts = {2};
  KernelParams params;
  params.sigma2 = Eigen::VectorXd::Constant(1, 1.5);
  params.theta = Eigen::MatrixXd::Constant(1, 1, 3.0);
  params.angles = {Eigen::VectorXd::Constant(1, 1.1)};

  Dataset data;
  data.points.push_back({Eigen::VectorXd::Constant(1, 0.2), {1}});
  data.points.push_back({Eigen::VectorXd::Constant(1, 0.8), {2}});
  data.y.resize(2);
  data.y << 1.0, -0.5;

  const AgpModel model = AgpModel::with_params(data, space, params);
  MixedPoint w0{Eigen::VectorXd::Constant(1, 0.45), {2}};
  const PredictiveDist pred = model.predict(w0);

  // Direct evaluation with an explicit inverse.
  const MixedKernel kernel(params, 1, space);
  const double jitter = model.jitter();
  Eigen::Matrix2d phi;
  phi << kernel.cross_cov(data.points[0], data.points[0]) + jitter,
      kernel.cross_cov(data.points[0], data.points[1]),
      kernel.cross_cov(data.points[1], data.points[0]),
      kernel.cross_cov(data.points[1], data.points[1]) + jitter;
  Eigen::Vector2d r0(kernel.cross_cov(w0, data.points[0]),
                     kernel.cross_cov(w0, data.points[1]));
  const Eigen::Matrix2d inv = phi.inverse();
  const Eigen::Vector2d ones = Eigen::Vector2d::Ones();
  const double mu = ones.dot(inv * data.y) / ones.dot(inv * ones);
  const double mean = mu + r0.dot(inv * (data.y - mu * ones));
  const double var = params.sigma2.sum() - r0.dot(inv * r0);

  CHECK(pred.mean == doctest::Approx(mean).epsilon(1e-10));
  CHECK(pred.sd == doctest::Approx(std::sqrt(var)).epsilon(1e-8));
}

TEST_CASE("predict interpolates and reverts to the prior") {
  QualitativeSpace space;
  space.level_counts = {3};
  std::mt19937_64 rng(67);
  Dataset data = random_dataset(6, 1, space, rng);
  KernelParams params = testing::random_params(1, space, rng);
  const AgpModel model = AgpModel::with_params(data, space, params);

  SUBCASE("training points reproduce their responses") {
    const double total_sd = std::sqrt(params.sigma2.sum());
    for (int t = 0; t < data.size(); ++t) {
      const PredictiveDist pred = model.predict(data.points[t]);
      CHECK(std::abs(pred.mean - data.y[t]) <= 1e-6 * (1.0 + std::abs(data.y[t])));
      CHECK(pred.sd <= 1e-4 * total_sd);
    }
  }

  SUBCASE("far queries revert to the profiled prior") {
    KernelParams stiff = params;
    stiff.theta.setConstant(1e3);
    Dataset near_origin = data;
    for (auto& w : near_origin.points) w.x[0] *= 0.05;
    const AgpModel stiff_model = AgpModel::with_params(near_origin, space, stiff);
    MixedPoint far{Eigen::VectorXd::Constant(1, 1.0), {2}};
    const PredictiveDist pred = stiff_model.predict(far);
    CHECK(pred.mean == doctest::Approx(stiff_model.mu_hat()).epsilon(1e-6));
    CHECK(pred.sd ==
          doctest::Approx(std::sqrt(stiff.sigma2.sum())).epsilon(1e-6));
  }

  SUBCASE("variance lies in [0, total variance]") {
    for (int trial = 0; trial < 200; ++trial) {
      const MixedPoint w = testing::random_point(1, space, rng);
      const PredictiveDist pred = model.predict(w);
      CHECK(pred.sd >= 0.0);
      CHECK(pred.sd * pred.sd <= params.sigma2.sum() + 1e-8);
    }
  }
}

TEST_CASE("conditioning on more data never increases predictive variance") {
  QualitativeSpace space;
  space.level_counts = {2, 2};
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 5; ++trial) {
    const KernelParams params = testing::random_params(2, space, rng);
    Dataset data = random_dataset(5, 2, space, rng);
    const AgpModel small = AgpModel::with_params(data, space, params);

    Dataset larger = data;
    larger.points.push_back(testing::random_point(2, space, rng));
    larger.y.conservativeResize(6);
    larger.y[5] = 0.3;
    const AgpModel big = AgpModel::with_params(larger, space, params);

    for (int k = 0; k < 20; ++k) {
      const MixedPoint w = testing::random_point(2, space, rng);
      CHECK(big.predict(w).sd <= small.predict(w).sd + 1e-7);
    }
  }
}

TEST_CASE("fit handles constant responses") {
  QualitativeSpace space;
  space.level_counts = {3};
  std::mt19937_64 rng(97);
  Dataset data;
  for (int i = 0; i < 5; ++i) data.points.push_back(testing::random_point(1, space, rng));
  data.y = Eigen::VectorXd::Constant(5, 4.5);

  FitConfig config;
  config.n_starts = 2;
  const AgpModel model = AgpModel::fit(data, space, config);
  CHECK(model.mu_hat() == doctest::Approx(4.5).epsilon(1e-8));
  for (int trial = 0; trial < 10; ++trial) {
    const MixedPoint w = testing::random_point(1, space, rng);
    CHECK(model.predict(w).mean == doctest::Approx(4.5).epsilon(1e-6));
  }
}

TEST_CASE("fit interpolates and beats the generating parameters") {
  QualitativeSpace space;
  space.level_counts = {3};
  std::mt19937_64 rng(101);
  FitConfig config;
  config.n_starts = 3;

  for (int trial = 0; trial < 3; ++trial) {
    const KernelParams truth = testing::random_params(1, space, rng);
    std::vector<MixedPoint> points;
    for (int i = 0; i < 9; ++i) points.push_back(testing::random_point(1, space, rng));
    Dataset data;
    data.points = points;
    data.y = testing::sample_agp(points, truth, space, 1.0, rng);

    config.rng_seed = 1000 + trial;
    const AgpModel model = AgpModel::fit(data, space, config);

    // Interpolation at the fitted parameters.
    const double total_sd = std::sqrt(model.params().sigma2.sum());
    for (int t = 0; t < data.size(); ++t) {
      const PredictiveDist pred = model.predict(data.points[t]);
      CHECK(std::abs(pred.mean - data.y[t]) <= 1e-6 * (1.0 + std::abs(data.y[t])));
      CHECK(pred.sd <= 1e-4 * total_sd);
    }

    // The optimized likelihood is at least the truth's likelihood.
    const AgpModel at_truth = AgpModel::with_params(data, space, truth);
    CHECK(model.log_likelihood() >= at_truth.log_likelihood() - 1e-6);
  }
}

TEST_CASE("fit failure surfaces as FitFailure diagnostics") {
  QualitativeSpace space;
  space.level_counts = {2};
  Dataset data;
  data.points.push_back({Eigen::VectorXd::Constant(1, 0.1), {1}});
  data.y = Eigen::VectorXd::Constant(1, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(AgpModel::fit(data, space), std::invalid_argument);
}

TEST_SUITE_END();
