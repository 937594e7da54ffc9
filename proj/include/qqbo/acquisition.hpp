/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_ACQUISITION_HPP
#define QQBO_ACQUISITION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qqbo/model.hpp"

namespace qqbo {

enum class Strategy { AdaptiveCee, Cee, Ei, Mu, Si, Ra };
enum class Sense { Min, Max };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);  // throws std::invalid_argument

struct AcquisitionConfig {
  Strategy strategy = Strategy::AdaptiveCee;
  double rho = 2.0;     ///< exploration weight of the CEE criterion
  double alpha = 0.05;  ///< confidence level of the adaptive region
  Sense sense = Sense::Min;

  void validate() const;
};

/// Confidence-width multiplier beta = 2 log(pi^2 n^2 M / (6 alpha)), clamped
/// at zero when the log argument drops below one. Strictly increasing in n
/// and M, decreasing in alpha.
double confidence_beta(int n, long M, double alpha);

/// Composite exploitation-exploration value mean - rho * sd (lower is
/// better); with rho = z_{alpha/2} this is a lower confidence limit.
double cee_score(const PredictiveDist& pred, double rho);

/// (mean -/+ sqrt(beta) * sd).
std::pair<double, double> confidence_bounds(const PredictiveDist& pred, double beta);

/// Expected improvement over best_observed under the predictive normal;
/// sd = 0 degenerates to max(best_observed - mean, 0).
double ei_score(const PredictiveDist& pred, double best_observed);

/// Per-candidate confidence bounds and membership of the adaptive region
/// {w : mu_L(w) <= min_u mu_U(u)}, thresholded over the same candidate set.
struct RegionBounds {
  double beta = 0.0;
  std::vector<double> mu_lower;
  std::vector<double> mu_upper;
  double threshold = 0.0;  ///< min over candidates of mu_upper
  std::vector<bool> in_region;

  std::size_t count_in_region() const;
};

RegionBounds adaptive_region(const std::vector<PredictiveDist>& preds, double beta);
RegionBounds adaptive_region(const std::vector<MixedPoint>& candidates,
                             const AgpModel& model, double beta);

/// Extra inputs some strategies need.
struct ScoreContext {
  double best_observed = 0.0;  ///< EI
  double beta = 0.0;           ///< adaptive CEE (region handled by caller)
};

/// Single-orientation score: lower is better for every strategy (EI is
/// negated, MU is the mean, SI is -sd, CEE as-is). RA is not a scoring
/// strategy and is rejected.
double score(const PredictiveDist& pred, const AcquisitionConfig& config,
             const ScoreContext& context);

}  // namespace qqbo

#endif
