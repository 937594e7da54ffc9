/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qqbo/errors.hpp"
#include "qqbo/optimize.hpp"

namespace qqbo {

namespace {

using std::numbers::pi;

void check_levels(const std::vector<int>& levels, int q) {
  if (static_cast<int>(levels.size()) != q)
    throw std::invalid_argument("benchmark: wrong number of level indices");
  for (int z : levels) {
    if (z < 1 || z > 3) throw std::invalid_argument("benchmark: level index out of range");
  }
}

DomainSpec unit_domain_1d() {
  DomainSpec d;
  d.lower = Eigen::VectorXd::Zero(1);
  d.upper = Eigen::VectorXd::Ones(1);
  d.qualitative.level_counts = {3};
  return d;
}

DomainSpec example2_domain() {
  DomainSpec d;
  d.lower = Eigen::VectorXd::Constant(3, -100.0);
  d.upper = Eigen::VectorXd::Constant(3, 100.0);
  d.qualitative.level_counts = {3, 3, 3};
  d.qualitative.labels = {{"-50", "0", "50"}, {"-50", "0", "50"}, {"-50", "0", "50"}};
  return d;
}

DomainSpec unit_domain_3d() {
  DomainSpec d;
  d.lower = Eigen::VectorXd::Zero(3);
  d.upper = Eigen::VectorXd::Ones(3);
  d.qualitative.level_counts = {3, 3, 3};
  return d;
}

std::vector<BenchmarkFn> build_registry() {
  std::vector<BenchmarkFn> fns;

  BenchmarkFn ex1;
  ex1.name = "example1";
  ex1.domain = unit_domain_1d();
  ex1.eval_user = [](const Eigen::VectorXd& x, const std::vector<int>& z) {
    return example1(x[0], z.at(0));
  };
  ex1.known_min = KnownMin{-1.0, Eigen::VectorXd::Constant(1, 0.5), {3}};
  ex1.default_init_runs = 3;
  ex1.default_plan = QualitativePlan::FullFactorial;
  ex1.default_sequential = 6;
  fns.push_back(std::move(ex1));

  BenchmarkFn ex2;
  ex2.name = "example2";
  ex2.domain = example2_domain();
  ex2.eval_user = [](const Eigen::VectorXd& x, const std::vector<int>& z) {
    return example2(x, z);
  };
  ex2.default_init_runs = 9;
  ex2.default_plan = QualitativePlan::Fractional3Level;
  ex2.default_sequential = 9;
  fns.push_back(std::move(ex2));

  BenchmarkFn ex3;
  ex3.name = "example3";
  ex3.domain = unit_domain_3d();
  ex3.eval_user = [](const Eigen::VectorXd& x, const std::vector<int>& z) {
    return example3(x, z);
  };
  ex3.default_init_runs = 9;
  ex3.default_plan = QualitativePlan::Fractional3Level;
  ex3.default_sequential = 6;
  fns.push_back(std::move(ex3));

  for (const auto& fn : fns) fn.validate();
  return fns;
}

}  // namespace

double example1(double x, int z) {
  switch (z) {
    case 1: return 2.0 + std::cos(6.0 * pi * x);
    case 2: return 1.0 - std::cos(4.0 * pi * x);
    case 3: return std::cos(2.0 * pi * x);
    default: throw std::invalid_argument("example1: z must be 1, 2 or 3");
  }
}

double example2(const Eigen::VectorXd& x_user, const std::vector<int>& levels) {
  if (x_user.size() != 3) throw std::invalid_argument("example2: x must have 3 entries");
  check_levels(levels, 3);
  // Level index -> factor value, then z_{4-i} pairs with x_i.
  const double values[3] = {-50.0, 0.0, 50.0};
  double linear = 0.0;
  double product = 1.0;
  for (int i = 1; i <= 3; ++i) {
    const double xi = x_user[i - 1];
    const double zi = values[levels[3 - i] - 1];
    const double root = std::sqrt(static_cast<double>(i));
    linear += xi * zi / 4000.0;
    product *= std::cos(xi / root) * std::sin(zi / root);
  }
  return linear + product;
}

double example3(const Eigen::VectorXd& x, const std::vector<int>& levels) {
  if (x.size() != 3) throw std::invalid_argument("example3: x must have 3 entries");
  check_levels(levels, 3);
  const double x1 = x[0], x2 = x[1], x3 = x[2];

  double f = 0.0;
  switch (levels[0]) {
    case 1: f = x1 + x2 * x2 + x3 * x3 * x3; break;
    case 2: f = x1 * x1 + x2 + x3 * x3 * x3; break;
    case 3: f = x1 * x1 * x1 + x2 * x2 + x3; break;
  }
  double g = 0.0;
  switch (levels[1]) {
    case 1: g = std::cos(x1) + std::cos(2 * x2) + std::cos(3 * x3); break;
    case 2: g = std::cos(3 * x1) + std::cos(2 * x2) + std::cos(x3); break;
    case 3: g = std::cos(2 * x1) + std::cos(x2) + std::cos(3 * x3); break;
  }
  double h = 0.0;
  switch (levels[2]) {
    case 1: h = std::sin(x1) + std::sin(2 * x2) + std::sin(3 * x3); break;
    case 2: h = std::sin(3 * x1) + std::sin(2 * x2) + std::sin(x3); break;
    case 3: h = std::sin(2 * x1) + std::sin(x2) + std::sin(3 * x3); break;
  }
  return f * (g + h);
}

void BenchmarkFn::validate() const {
  domain.validate();
  if (known_min) {
    const double v = eval_user(known_min->x_user, known_min->z);
    if (std::abs(v - known_min->value) > 1e-9)
      throw std::logic_error("benchmark '" + name + "': known minimum does not validate");
  }
}

const std::vector<BenchmarkFn>& benchmark_registry() {
  static const std::vector<BenchmarkFn> registry = build_registry();
  return registry;
}

const BenchmarkFn& benchmark_by_name(const std::string& name) {
  for (const auto& fn : benchmark_registry()) {
    if (fn.name == name) return fn;
  }
  throw std::invalid_argument("unknown benchmark function: " + name);
}

BruteForceResult brute_force_min(const BenchmarkFn& fn, double density,
                                 long max_evaluations) {
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("brute_force_min: density must be in (0, 1]");
  const int p = fn.domain.continuous_dim();
  const long M = fn.domain.qualitative.combination_count();
  const long grid_n = static_cast<long>(std::llround(1.0 / density)) + 1;

  double needed = static_cast<double>(M);
  for (int i = 0; i < p; ++i) needed *= static_cast<double>(grid_n);
  if (needed > static_cast<double>(max_evaluations)) {
    const long affordable =
        static_cast<long>(std::pow(static_cast<double>(max_evaluations) / M, 1.0 / p));
    std::ostringstream msg;
    msg << "brute_force_min: " << needed << " evaluations exceed the budget of "
        << max_evaluations << "; densest affordable grid is " << affordable
        << " points per axis (density " << 1.0 / std::max<long>(affordable - 1, 1)
        << ")";
    throw BudgetError(msg.str());
  }

  const auto combos = full_factorial(fn.domain.qualitative);
  BruteForceResult best;
  best.value = std::numeric_limits<double>::infinity();

  Eigen::VectorXd x(p);
  std::vector<long> idx(p, 0);
  for (const auto& combo : combos) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (int i = 0; i < p; ++i)
        x[i] = grid_n == 1 ? 0.5 : static_cast<double>(idx[i]) / (grid_n - 1);
      const double v = fn(MixedPoint{x, combo});
      ++best.evaluations;
      if (v < best.value) {
        best.value = v;
        best.argmin = MixedPoint{x, combo};
      }
      int i = p - 1;
      while (i >= 0 && ++idx[i] == grid_n) idx[i--] = 0;
      if (i < 0) break;
    }
  }

  // One coordinate-wise polish around the winning grid cell.
  const double step = grid_n == 1 ? 0.5 : 1.0 / (grid_n - 1);
  MixedPoint polished = best.argmin;
  for (int round = 0; round < 2; ++round) {
    for (int i = 0; i < p; ++i) {
      const double lo = std::max(0.0, polished.x[i] - step);
      const double hi = std::min(1.0, polished.x[i] + step);
      const double xi = golden_section_min(
          [&](double v) {
            MixedPoint w = polished;
            w.x[i] = v;
            ++best.evaluations;
            return fn(w);
          },
          lo, hi, 24);
      MixedPoint w = polished;
      w.x[i] = xi;
      best.evaluations += 2;
      if (fn(w) < fn(polished)) polished = w;
    }
  }
  const double polished_value = fn(polished);
  if (polished_value < best.value) {
    best.value = polished_value;
    best.argmin = polished;
  }
  return best;
}

}  // namespace qqbo
