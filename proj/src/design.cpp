/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/design.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qqbo/rng.hpp"

namespace qqbo {

namespace {

constexpr double kDuplicateTol = 1e-6;

bool near_training_point(const MixedPoint& w, const Dataset& data) {
  for (const auto& t : data.points) {
    if (t.z == w.z && (t.x - w.x).cwiseAbs().maxCoeff() < kDuplicateTol) return true;
  }
  return false;
}

}  // namespace

std::string qualitative_plan_name(QualitativePlan plan) {
  switch (plan) {
    case QualitativePlan::FullFactorial: return "full_factorial";
    case QualitativePlan::Fractional3Level: return "fractional_3level";
    case QualitativePlan::Random: return "random";
  }
  throw std::invalid_argument("unknown qualitative plan");
}

QualitativePlan qualitative_plan_from_name(const std::string& name) {
  if (name == "full_factorial") return QualitativePlan::FullFactorial;
  if (name == "fractional_3level") return QualitativePlan::Fractional3Level;
  if (name == "random") return QualitativePlan::Random;
  throw std::invalid_argument("unknown qualitative plan: " + name);
}

Eigen::MatrixXd random_lhd(int n, int p, std::mt19937_64& rng) {
  if (n < 1 || p < 1) throw std::invalid_argument("random_lhd: n, p must be >= 1");
  Eigen::MatrixXd design(n, p);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> perm(n);
  for (int col = 0; col < p; ++col) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int row = 0; row < n; ++row) {
      design(row, col) = (perm[row] + unif(rng)) / n;
    }
  }
  return design;
}

std::vector<std::vector<int>> full_factorial(const QualitativeSpace& space) {
  space.validate();
  const int q = space.factor_count();
  std::vector<std::vector<int>> rows;
  rows.reserve(space.combination_count());
  std::vector<int> current(q, 1);
  while (true) {
    rows.push_back(current);
    int j = q - 1;
    while (j >= 0) {
      if (current[j] < space.level_counts[j]) {
        ++current[j];
        break;
      }
      current[j] = 1;
      --j;
    }
    if (j < 0) break;
  }
  return rows;
}

std::vector<std::vector<int>> fractional_factorial_3level(int q) {
  if (q != 3)
    throw std::invalid_argument("fractional_factorial_3level supports q = 3 only");
  std::vector<std::vector<int>> rows;
  rows.reserve(9);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      rows.push_back({a + 1, b + 1, (a + b) % 3 + 1});
    }
  }
  return rows;
}

std::vector<MixedPoint> initial_design(const InitialDesignSpec& spec,
                                       const DomainSpec& domain) {
  domain.validate();
  const auto& space = domain.qualitative;

  std::vector<std::vector<int>> plan;
  switch (spec.plan) {
    case QualitativePlan::FullFactorial:
      plan = full_factorial(space);
      if (static_cast<int>(plan.size()) != spec.n_runs)
        throw std::invalid_argument("full factorial requires n_runs = M");
      break;
    case QualitativePlan::Fractional3Level: {
      if (space.factor_count() != 3 ||
          !std::all_of(space.level_counts.begin(), space.level_counts.end(),
                       [](int m) { return m == 3; }))
        throw std::invalid_argument("fractional plan requires q = 3 with 3 levels each");
      plan = fractional_factorial_3level();
      if (spec.n_runs != 9)
        throw std::invalid_argument("fractional 3-level plan requires n_runs = 9");
      break;
    }
    case QualitativePlan::Random: {
      auto rng = make_engine(derive_seed(spec.rng_seed, 0x52414e44));
      plan.resize(spec.n_runs);
      for (auto& row : plan) {
        row.resize(space.factor_count());
        for (int j = 0; j < space.factor_count(); ++j) {
          std::uniform_int_distribution<int> pick(1, space.level_counts[j]);
          row[j] = pick(rng);
        }
      }
      break;
    }
  }

  auto rng = make_engine(spec.rng_seed);
  const Eigen::MatrixXd lhd = random_lhd(spec.n_runs, domain.continuous_dim(), rng);
  std::vector<MixedPoint> points;
  points.reserve(spec.n_runs);
  for (int t = 0; t < spec.n_runs; ++t) {
    points.push_back({lhd.row(t).transpose(), plan[t]});
  }
  return points;
}

CandidateSet candidate_pool(const Dataset& data, const DomainSpec& domain,
                            int n_per_combo, std::mt19937_64& rng) {
  if (n_per_combo < 1) throw std::invalid_argument("candidate_pool: N_c must be >= 1");
  const auto combos = full_factorial(domain.qualitative);
  const int p = domain.continuous_dim();

  // The x locations of the best-so-far trajectory (prefix minima of y).
  std::vector<Eigen::VectorXd> best_xs;
  double running = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < data.y.size(); ++t) {
    if (data.y[t] < running) {
      running = data.y[t];
      best_xs.push_back(data.points[static_cast<std::size_t>(t)].x);
    }
  }

  CandidateSet pool;
  pool.per_level_count = n_per_combo;
  pool.points.reserve(combos.size() * (n_per_combo + best_xs.size()));
  for (const auto& combo : combos) {
    const Eigen::MatrixXd lhd = random_lhd(n_per_combo, p, rng);
    for (int t = 0; t < n_per_combo; ++t) {
      MixedPoint w{lhd.row(t).transpose(), combo};
      if (!near_training_point(w, data)) pool.points.push_back(std::move(w));
    }
    for (const auto& x : best_xs) {
      MixedPoint cross{x, combo};
      if (!near_training_point(cross, data)) pool.points.push_back(std::move(cross));
    }
  }
  return pool;
}

}  // namespace qqbo
