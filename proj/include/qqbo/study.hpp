/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_STUDY_HPP
#define QQBO_STUDY_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qqbo/benchmarks.hpp"
#include "qqbo/campaign.hpp"

namespace qqbo {

/// One compared arm of a study: a strategy plus its CEE weight.
struct StrategySpec {
  Strategy strategy = Strategy::AdaptiveCee;
  double rho = 2.0;
  std::string label;
};

StrategySpec make_strategy_spec(Strategy strategy, double rho = 2.0);

/// Parses "adaptive_cee,ei,mu,si,ra"; a "name@rho" token overrides rho.
std::vector<StrategySpec> parse_strategy_list(const std::string& list,
                                              double default_rho = 2.0);

struct StudyConfig {
  std::vector<StrategySpec> strategies;
  int n_reps = 100;
  int n_init = 0;        ///< 0 -> benchmark default
  int n_sequential = -1; ///< -1 -> benchmark default
  std::uint64_t seed = 0;
  double alpha = 0.05;
  int n_candidates = 200;
  FitConfig fit;
  bool polish = false;
  bool collect_timings = false;  ///< off by default so reports are reproducible
  int n_threads = 0;             ///< 0 -> hardware concurrency
};

struct ReplicationOutcome {
  int replication = 0;
  std::uint64_t seed = 0;  ///< stream root; re-runnable via run_single_replication
  double best_value = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  bool failed = false;
};

struct StrategySummary {
  std::string label;
  int n = 0;       ///< successful replications
  int failed = 0;
  double median = 0.0, q1 = 0.0, q3 = 0.0, min = 0.0, max = 0.0;
};

struct StudyResult {
  std::string function;
  StudyConfig config;
  std::vector<std::vector<ReplicationOutcome>> outcomes;  ///< [strategy][rep]
  std::vector<StrategySummary> summaries;
  std::string fingerprint;

  const std::vector<ReplicationOutcome>& rows_for(const std::string& label) const;
  const StrategySummary& summary_for(const std::string& label) const;
};

/// Campaign configuration for one (replication, strategy) cell. All
/// strategies of a replication share the same initial design.
CampaignConfig study_campaign_config(const BenchmarkFn& fn, const StrategySpec& spec,
                                     const StudyConfig& config,
                                     std::uint64_t replication_seed,
                                     int strategy_index);

/// Runs one cell from its stream root; returns the finished campaign.
Campaign run_single_replication(const BenchmarkFn& fn, const StrategySpec& spec,
                                const StudyConfig& config,
                                std::uint64_t replication_seed, int strategy_index);

/// Paired replication study: every strategy sees the same initial design
/// within a replication. Individual replication failures are recorded; the
/// study aborts when more than 5% of cells fail.
StudyResult replicate_study(const BenchmarkFn& fn, const StudyConfig& config);

/// Type-7 (linear interpolation) sample quantile.
double sample_quantile(std::vector<double> values, double q);

StrategySummary summarize(const std::string& label,
                          const std::vector<ReplicationOutcome>& rows);

enum class ReportFormat { Csv, Json };

/// raw.csv (always CSV) plus summary and quantile files in the chosen
/// format. Byte-stable for identical StudyResults.
void write_report(const StudyResult& result, const std::filesystem::path& dir,
                  ReportFormat format = ReportFormat::Csv);

/// Reconstructs outcomes from a raw.csv and recomputes the summaries;
/// used by the report CLI and the recompute check.
StudyResult read_raw_csv(const std::filesystem::path& file);

/// 1-D diagnostic grid: `per_axis` equispaced x values crossed with every
/// level combination. Only defined for one continuous factor.
std::vector<MixedPoint> diagnostic_grid(const DomainSpec& domain, int per_axis);

/// Adaptive region evaluated on the diagnostic grid with
/// beta(n = model size, M, alpha).
RegionBounds region_snapshot(const AgpModel& model, const DomainSpec& domain,
                             int per_axis, double alpha);

/// Per-iteration criterion/best-so-far traces plus (for one continuous
/// factor) region-membership snapshots for the first `n_traced`
/// replications of each sequential strategy.
void write_traces(const BenchmarkFn& fn, const StudyConfig& config, int n_traced,
                  const std::filesystem::path& dir);

}  // namespace qqbo

#endif
