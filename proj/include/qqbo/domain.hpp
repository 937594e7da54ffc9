/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_DOMAIN_HPP
#define QQBO_DOMAIN_HPP

#include <Eigen/Core>

#include <string>
#include <vector>

namespace qqbo {

/// The discrete part of a mixed design space: q factors with m_j >= 2
/// levels each. Level indices are 1-based throughout.
struct QualitativeSpace {
  std::vector<int> level_counts;                  ///< m_1, ..., m_q
  std::vector<std::vector<std::string>> labels;   ///< optional, per factor

  int factor_count() const { return static_cast<int>(level_counts.size()); }

  /// M = prod_j m_j, the number of distinct level combinations.
  long combination_count() const;

  /// Label for level `level` (1-based) of factor `j` (0-based); falls back
  /// to the numeric index when no labels were given.
  std::string level_label(int j, int level) const;

  void validate() const;  // throws std::invalid_argument

  bool operator==(const QualitativeSpace& other) const {
    return level_counts == other.level_counts && labels == other.labels;
  }
};

/// One design point w = (x, z). x lives on the internal unit scale [0,1]^p;
/// z holds 1-based level indices, z_j in {1, ..., m_j}.
struct MixedPoint {
  Eigen::VectorXd x;
  std::vector<int> z;

  bool same_levels(const MixedPoint& other) const { return z == other.z; }
};

/// User-facing design space: box bounds for the continuous factors (user
/// units) plus the qualitative space. Kernel code only ever sees unit-scale
/// coordinates; to_unit/from_unit translate at the boundary.
struct DomainSpec {
  Eigen::VectorXd lower;   ///< per-coordinate lo_i, user units
  Eigen::VectorXd upper;   ///< per-coordinate hi_i, lo_i < hi_i
  QualitativeSpace qualitative;
  std::vector<std::string> continuous_names;   ///< optional, for reports
  std::vector<std::string> qualitative_names;  ///< optional, for reports

  int continuous_dim() const { return static_cast<int>(lower.size()); }

  Eigen::VectorXd to_unit(const Eigen::VectorXd& user) const;
  Eigen::VectorXd from_unit(const Eigen::VectorXd& unit) const;

  /// Checks a point against this space (dimensions, level ranges, unit box).
  void check_point(const MixedPoint& w) const;

  void validate() const;  // throws std::invalid_argument
};

}  // namespace qqbo

#endif
