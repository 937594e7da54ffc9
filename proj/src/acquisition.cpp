/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qqbo {

namespace {

double normal_pdf(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::AdaptiveCee: return "adaptive_cee";
    case Strategy::Cee: return "cee";
    case Strategy::Ei: return "ei";
    case Strategy::Mu: return "mu";
    case Strategy::Si: return "si";
    case Strategy::Ra: return "ra";
  }
  throw std::invalid_argument("unknown strategy");
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "adaptive_cee") return Strategy::AdaptiveCee;
  if (name == "cee") return Strategy::Cee;
  if (name == "ei") return Strategy::Ei;
  if (name == "mu") return Strategy::Mu;
  if (name == "si") return Strategy::Si;
  if (name == "ra") return Strategy::Ra;
  throw std::invalid_argument("unknown strategy name: " + name);
}

void AcquisitionConfig::validate() const {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
}

double confidence_beta(int n, long M, double alpha) {
  if (n < 1 || M < 1) throw std::invalid_argument("confidence_beta: n, M must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("confidence_beta: alpha must be in (0,1)");
  const double arg = std::numbers::pi * std::numbers::pi * static_cast<double>(n) *
                     static_cast<double>(n) * static_cast<double>(M) / (6.0 * alpha);
  return arg <= 1.0 ? 0.0 : 2.0 * std::log(arg);
}

double cee_score(const PredictiveDist& pred, double rho) {
  return pred.mean - rho * pred.sd;
}

std::pair<double, double> confidence_bounds(const PredictiveDist& pred, double beta) {
  const double half_width = std::sqrt(beta) * pred.sd;
  return {pred.mean - half_width, pred.mean + half_width};
}

double ei_score(const PredictiveDist& pred, double best_observed) {
  const double delta = best_observed - pred.mean;
  if (pred.sd <= 0.0) return std::max(delta, 0.0);
  const double u = delta / pred.sd;
  return pred.sd * normal_pdf(u) + delta * normal_cdf(u);
}

std::size_t RegionBounds::count_in_region() const {
  return static_cast<std::size_t>(
      std::count(in_region.begin(), in_region.end(), true));
}

RegionBounds adaptive_region(const std::vector<PredictiveDist>& preds, double beta) {
  if (preds.empty()) throw std::invalid_argument("adaptive_region: empty candidate set");
  RegionBounds out;
  out.beta = beta;
  out.mu_lower.reserve(preds.size());
  out.mu_upper.reserve(preds.size());
  for (const auto& pred : preds) {
    const auto [lo, hi] = confidence_bounds(pred, beta);
    out.mu_lower.push_back(lo);
    out.mu_upper.push_back(hi);
  }
  out.threshold = *std::min_element(out.mu_upper.begin(), out.mu_upper.end());
  out.in_region.reserve(preds.size());
  for (const double lo : out.mu_lower) out.in_region.push_back(lo <= out.threshold);
  return out;
}

RegionBounds adaptive_region(const std::vector<MixedPoint>& candidates,
                             const AgpModel& model, double beta) {
  std::vector<PredictiveDist> preds;
  preds.reserve(candidates.size());
  for (const auto& w : candidates) preds.push_back(model.predict(w));
  return adaptive_region(preds, beta);
}

double score(const PredictiveDist& pred, const AcquisitionConfig& config,
             const ScoreContext& context) {
  switch (config.strategy) {
    case Strategy::AdaptiveCee:
    case Strategy::Cee:
      return cee_score(pred, config.rho);
    case Strategy::Ei:
      return -ei_score(pred, context.best_observed);
    case Strategy::Mu:
      return pred.mean;
    case Strategy::Si:
      return -pred.sd;
    case Strategy::Ra:
      break;
  }
  throw std::invalid_argument("RA is a one-shot design, not a scoring strategy");
}

}  // namespace qqbo
