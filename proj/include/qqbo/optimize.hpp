/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_OPTIMIZE_HPP
#define QQBO_OPTIMIZE_HPP

#include <Eigen/Core>

#include <functional>

namespace qqbo {

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  long evaluations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double initial_step = 0.75;  ///< simplex edge in each coordinate
  long max_evaluations = 0;    ///< 0 -> 600 * dim
  double f_tolerance = 1e-6;   ///< relative spread of simplex values
  int restarts = 1;            ///< re-seed simplex at the incumbent
};

/// Derivative-free simplex minimization of an unconstrained objective.
/// Deterministic for a given start; the objective may return +inf/huge
/// values to mark infeasible regions.
MinimizeResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& start,
                           const NelderMeadOptions& options = {});

/// Golden-section search for the minimum of a unimodal 1-D function on
/// [lo, hi]; runs exactly `evaluations` calls of f (>= 2).
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, int evaluations);

}  // namespace qqbo

#endif
