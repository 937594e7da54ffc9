/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_DESIGN_HPP
#define QQBO_DESIGN_HPP

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

#include "qqbo/domain.hpp"
#include "qqbo/model.hpp"

namespace qqbo {

enum class QualitativePlan { FullFactorial, Fractional3Level, Random };

std::string qualitative_plan_name(QualitativePlan plan);
QualitativePlan qualitative_plan_from_name(const std::string& name);

struct InitialDesignSpec {
  int n_runs = 0;
  QualitativePlan plan = QualitativePlan::FullFactorial;
  std::uint64_t rng_seed = 0;
};

/// Random Latin hypercube: each column visits all n equal strata of [0,1]
/// exactly once, at a uniform location within each stratum.
Eigen::MatrixXd random_lhd(int n, int p, std::mt19937_64& rng);

/// All M level combinations, 1-based, in lexicographic order (last factor
/// fastest).
std::vector<std::vector<int>> full_factorial(const QualitativeSpace& space);

/// The 9-run regular third fraction of the 3^3 design with defining relation
/// z3 = z1 + z2 (mod 3). Every two-factor projection is a full 3x3 grid.
std::vector<std::vector<int>> fractional_factorial_3level(int q = 3);

/// Pairs the t-th qualitative plan row with the t-th LHD row.
std::vector<MixedPoint> initial_design(const InitialDesignSpec& spec,
                                       const DomainSpec& domain);

/// Finite search pool for the acquisition argmin.
struct CandidateSet {
  std::vector<MixedPoint> points;
  int per_level_count = 0;  ///< continuous candidates per level combination
};

/// For every level combination: a fresh n_per_combo-point LHD over x plus
/// the incumbent-best x re-crossed with that combination. Candidates within
/// 1e-6 (unit scale, same levels) of a training point are dropped.
CandidateSet candidate_pool(const Dataset& data, const DomainSpec& domain,
                            int n_per_combo, std::mt19937_64& rng);

}  // namespace qqbo

#endif
