/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_CAMPAIGN_HPP
#define QQBO_CAMPAIGN_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "qqbo/acquisition.hpp"
#include "qqbo/design.hpp"
#include "qqbo/domain.hpp"
#include "qqbo/model.hpp"

namespace qqbo {

struct CampaignConfig {
  DomainSpec domain;
  AcquisitionConfig acquisition;
  InitialDesignSpec init;
  int n_sequential = 0;
  FitConfig fit;
  std::uint64_t rng_seed = 0;
  int n_candidates = 200;  ///< continuous candidates per level combination
  bool polish = false;     ///< golden-section refinement of the winning x

  int total_budget() const { return init.n_runs + n_sequential; }
  void validate() const;
};

/// One row of the per-iteration trace. For initial-design and RA points the
/// model-dependent fields are NaN / -1.
struct HistoryRecord {
  MixedPoint point;
  double criterion = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  long region_size = -1;
  long pool_size = -1;
  double log_likelihood = std::numeric_limits<double>::quiet_NaN();
};

enum class Phase { Ready, AwaitingResponse };

/// A sequential-design session. ask() proposes the next point (initial
/// design first, then model-guided), tell() records its response. The
/// internal objective sense is always minimization; for Sense::Max the
/// responses are negated at this boundary.
class Campaign {
public:
  explicit Campaign(CampaignConfig config);

  bool exhausted() const;
  MixedPoint ask();      // ProtocolError when awaiting or out of budget
  void tell(double y);   // ProtocolError when not awaiting; y must be finite

  const CampaignConfig& config() const { return config_; }
  /// Swap the acquisition settings mid-campaign (open-loop sessions only
  /// switch between scoring strategies; RA cannot be entered or left).
  void set_acquisition(const AcquisitionConfig& acquisition);
  const Dataset& data() const { return data_; }
  Phase phase() const { return phase_; }
  int iteration() const { return iteration_; }
  const std::vector<HistoryRecord>& history() const { return history_; }

  /// Best response so far on the internal (minimization) scale.
  double best_value() const { return best_value_; }
  /// Best response in user terms (negated back for Sense::Max).
  double best_value_user() const;
  const MixedPoint& best_point() const { return best_point_; }

  /// Diagnostics from the most recent model-based ask; null before one.
  const AgpModel* last_model() const { return model_.get(); }
  const CandidateSet* last_pool() const { return last_pool_ ? &*last_pool_ : nullptr; }
  const RegionBounds* last_region() const {
    return last_region_ ? &*last_region_ : nullptr;
  }

private:
  friend struct CampaignSerializer;
  Campaign() = default;

  MixedPoint propose_sequential();

  CampaignConfig config_;
  Dataset data_;
  std::vector<MixedPoint> queue_;  ///< pre-generated points not yet dispatched
  std::optional<MixedPoint> awaiting_;
  HistoryRecord pending_record_;
  int iteration_ = 0;
  Phase phase_ = Phase::Ready;
  std::mt19937_64 rng_;
  std::vector<HistoryRecord> history_;
  double best_value_ = std::numeric_limits<double>::infinity();
  MixedPoint best_point_;
  std::shared_ptr<const AgpModel> model_;
  std::optional<KernelParams> warm_params_;
  std::optional<CandidateSet> last_pool_;
  std::optional<RegionBounds> last_region_;
  bool used_stale_model_ = false;
};

/// Closed-loop driver: evaluates the initial design, then runs the
/// sequential iterations against `objective` (user-sense responses,
/// unit-scale query points). The full budget is always spent.
Campaign run_campaign(const std::function<double(const MixedPoint&)>& objective,
                      const CampaignConfig& config);

/// One-shot baseline: the whole budget is drawn up front (uniform levels,
/// one LHD over x) and evaluated without any model.
Campaign run_ra(const std::function<double(const MixedPoint&)>& objective,
                CampaignConfig config);

}  // namespace qqbo

#endif
