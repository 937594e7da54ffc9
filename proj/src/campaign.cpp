/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qqbo/errors.hpp"
#include "qqbo/optimize.hpp"
#include "qqbo/rng.hpp"

namespace qqbo {

namespace {

constexpr double kRegionStarvationFraction = 0.05;
constexpr int kMaxPoolDoublings = 2;
constexpr int kPolishBudget = 50;

long argmin_index(const std::vector<double>& values) {
  long best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < best_value) {
      best_value = values[i];
      best = static_cast<long>(i);
    }
  }
  return best;
}

bool near_training(const MixedPoint& w, const Dataset& data) {
  for (const auto& t : data.points) {
    if (t.z == w.z && (t.x - w.x).cwiseAbs().maxCoeff() < 1e-6) return true;
  }
  return false;
}

}  // namespace

void CampaignConfig::validate() const {
  domain.validate();
  acquisition.validate();
  if (init.n_runs < 1) throw std::invalid_argument("initial design needs >= 1 run");
  if (n_sequential < 0) throw std::invalid_argument("n_sequential must be >= 0");
  if (n_candidates < 1) throw std::invalid_argument("n_candidates must be >= 1");
  if (fit.n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
}

Campaign::Campaign(CampaignConfig config) : config_(std::move(config)) {
  config_.validate();
  rng_ = make_engine(config_.rng_seed);
  if (config_.acquisition.strategy == Strategy::Ra) {
    InitialDesignSpec one_shot;
    one_shot.n_runs = config_.total_budget();
    one_shot.plan = QualitativePlan::Random;
    one_shot.rng_seed = derive_seed(config_.rng_seed, 0x1a0fULL);
    queue_ = initial_design(one_shot, config_.domain);
  } else {
    queue_ = initial_design(config_.init, config_.domain);
  }
}

void Campaign::set_acquisition(const AcquisitionConfig& acquisition) {
  acquisition.validate();
  const bool was_ra = config_.acquisition.strategy == Strategy::Ra;
  const bool is_ra = acquisition.strategy == Strategy::Ra;
  if (was_ra != is_ra)
    throw ProtocolError("cannot switch between RA and sequential strategies");
  if (acquisition.sense != config_.acquisition.sense && data_.size() > 0)
    throw ProtocolError("cannot change the objective sense after observations");
  config_.acquisition = acquisition;
}

bool Campaign::exhausted() const {
  return phase_ == Phase::Ready && queue_.empty() &&
         iteration_ >= config_.total_budget();
}

double Campaign::best_value_user() const {
  return config_.acquisition.sense == Sense::Max ? -best_value_ : best_value_;
}

MixedPoint Campaign::ask() {
  if (phase_ == Phase::AwaitingResponse)
    throw ProtocolError("ask called while a response is pending");

  pending_record_ = HistoryRecord{};
  if (!queue_.empty()) {
    awaiting_ = queue_.front();
    queue_.erase(queue_.begin());
    pending_record_.point = *awaiting_;
  } else {
    if (iteration_ >= config_.total_budget())
      throw ProtocolError("campaign budget exhausted");
    awaiting_ = propose_sequential();
  }
  phase_ = Phase::AwaitingResponse;
  return *awaiting_;
}

MixedPoint Campaign::propose_sequential() {
  const auto& acq = config_.acquisition;
  const long M = config_.domain.qualitative.combination_count();

  FitConfig fit_config = config_.fit;
  fit_config.rng_seed = rng_();
  std::shared_ptr<const AgpModel> model;
  try {
    model = std::make_shared<const AgpModel>(
        AgpModel::fit(data_, config_.domain.qualitative, fit_config, nullptr));
    used_stale_model_ = false;
  } catch (const FitFailure&) {
    // Fall back to the previous model for a single iteration.
    if (!model_ || used_stale_model_) throw;
    model = model_;
    used_stale_model_ = true;
  }
  model_ = model;
  warm_params_ = model->params();

  const double beta = confidence_beta(data_.size(), M, acq.alpha);
  ScoreContext context{best_value_, beta};

  CandidateSet pool;
  std::vector<PredictiveDist> preds;
  std::optional<RegionBounds> region;
  int n_per_combo = config_.n_candidates;
  for (int round = 0;; ++round) {
    pool = candidate_pool(data_, config_.domain, n_per_combo, rng_);
    preds.clear();
    preds.reserve(pool.points.size());
    for (const auto& w : pool.points) preds.push_back(model->predict(w));
    if (acq.strategy != Strategy::AdaptiveCee) break;
    region = adaptive_region(preds, beta);
    // Densify when the region keeps almost nothing of the pool.
    const double kept = static_cast<double>(region->count_in_region()) /
                        static_cast<double>(pool.points.size());
    if (kept >= kRegionStarvationFraction || round >= kMaxPoolDoublings) break;
    n_per_combo *= 2;
  }

  std::vector<double> scores(pool.points.size());
  for (std::size_t i = 0; i < pool.points.size(); ++i) {
    scores[i] = score(preds[i], acq, context);
    if (region && !region->in_region[i])
      scores[i] = std::numeric_limits<double>::infinity();
  }
  const long winner = argmin_index(scores);
  if (winner < 0) throw NumericalFailure("no scoreable candidate in the pool");

  MixedPoint chosen = pool.points[winner];
  double chosen_score = scores[winner];

  if (config_.polish) {
    const int p = config_.domain.continuous_dim();
    auto polished_score = [&](const MixedPoint& w) -> double {
      if (near_training(w, data_)) return std::numeric_limits<double>::infinity();
      const PredictiveDist pred = model->predict(w);
      if (region) {
        const auto [lo, hi] = confidence_bounds(pred, beta);
        (void)hi;
        if (lo > region->threshold) return std::numeric_limits<double>::infinity();
      }
      return score(pred, acq, context);
    };
    MixedPoint trial = chosen;
    int evals_left = kPolishBudget;
    const int per_coord = std::max(6, kPolishBudget / std::max(p, 1));
    for (int i = 0; i < p && evals_left > 0; ++i) {
      const int budget = std::min(per_coord, evals_left);
      const double xi = golden_section_min(
          [&](double v) {
            MixedPoint w = trial;
            w.x[i] = v;
            return polished_score(w);
          },
          0.0, 1.0, budget);
      evals_left -= budget;
      MixedPoint w = trial;
      w.x[i] = xi;
      if (polished_score(w) < polished_score(trial)) trial = w;
    }
    const double trial_score = polished_score(trial);
    if (trial_score < chosen_score) {
      chosen = trial;
      chosen_score = trial_score;
    }
  }

  pending_record_.point = chosen;
  pending_record_.criterion = chosen_score;
  pending_record_.beta = beta;
  pending_record_.region_size = region ? static_cast<long>(region->count_in_region()) : -1;
  pending_record_.pool_size = static_cast<long>(pool.points.size());
  pending_record_.log_likelihood = model->log_likelihood();
  last_pool_ = std::move(pool);
  last_region_ = std::move(region);
  return chosen;
}

void Campaign::tell(double y) {
  if (phase_ != Phase::AwaitingResponse)
    throw ProtocolError("tell called with no pending ask");
  if (!std::isfinite(y)) throw std::invalid_argument("response must be finite");

  const double internal = config_.acquisition.sense == Sense::Max ? -y : y;
  data_.points.push_back(*awaiting_);
  data_.y.conservativeResize(data_.y.size() + 1);
  data_.y[data_.y.size() - 1] = internal;
  if (internal < best_value_) {
    best_value_ = internal;
    best_point_ = *awaiting_;
  }
  history_.push_back(pending_record_);
  ++iteration_;
  awaiting_.reset();
  phase_ = Phase::Ready;
}

Campaign run_campaign(const std::function<double(const MixedPoint&)>& objective,
                      const CampaignConfig& config) {
  Campaign campaign(config);
  while (!campaign.exhausted()) {
    const MixedPoint w = campaign.ask();
    campaign.tell(objective(w));
  }
  return campaign;
}

Campaign run_ra(const std::function<double(const MixedPoint&)>& objective,
                CampaignConfig config) {
  config.acquisition.strategy = Strategy::Ra;
  return run_campaign(objective, config);
}

}  // namespace qqbo
