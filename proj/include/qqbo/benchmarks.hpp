/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_BENCHMARKS_HPP
#define QQBO_BENCHMARKS_HPP

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qqbo/design.hpp"
#include "qqbo/domain.hpp"

namespace qqbo {

/// Piecewise trigonometric test function: one continuous factor on [0,1],
/// one 3-level factor. Global minimum -1 at (x = 0.5, z = 3).
double example1(double x, int z);

/// Linear/oscillatory test function over x in (-100,100)^3 and three 3-level
/// ordinal factors with values {-50, 0, 50} (level indices 1..3).
double example2(const Eigen::VectorXd& x_user, const std::vector<int>& levels);

/// Separable product test function f_i(x) * (g_j(x) + h_k(x)) over [0,1]^3
/// with three 3-level factors selecting the component functions.
double example3(const Eigen::VectorXd& x, const std::vector<int>& levels);

struct KnownMin {
  double value;
  Eigen::VectorXd x_user;
  std::vector<int> z;
};

/// A named benchmark objective with its design space and the default
/// initial/sequential budgets used in the replication studies.
struct BenchmarkFn {
  std::string name;
  DomainSpec domain;
  std::function<double(const Eigen::VectorXd&, const std::vector<int>&)> eval_user;
  std::optional<KnownMin> known_min;
  int default_init_runs = 0;
  QualitativePlan default_plan = QualitativePlan::FullFactorial;
  int default_sequential = 0;

  /// Evaluate at a unit-scale point.
  double operator()(const MixedPoint& w) const {
    return eval_user(domain.from_unit(w.x), w.z);
  }

  void validate() const;  // known_min must reproduce within 1e-9
};

const std::vector<BenchmarkFn>& benchmark_registry();
const BenchmarkFn& benchmark_by_name(const std::string& name);

struct BruteForceResult {
  double value = 0.0;
  MixedPoint argmin;  // unit scale
  long evaluations = 0;
};

/// Exhaustive minimum over all level combinations x a uniform grid with
/// unit-scale step `density`, followed by one coordinate-wise golden-section
/// polish around the best grid cell. Throws BudgetError (reporting the
/// densest affordable grid) when the evaluation count would exceed
/// max_evaluations.
BruteForceResult brute_force_min(const BenchmarkFn& fn, double density,
                                 long max_evaluations = 10'000'000);

}  // namespace qqbo

#endif
