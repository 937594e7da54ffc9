/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace qqbo {

long QualitativeSpace::combination_count() const {
  long m = 1;
  for (int mj : level_counts) m *= mj;
  return m;
}

std::string QualitativeSpace::level_label(int j, int level) const {
  if (j < static_cast<int>(labels.size()) &&
      level - 1 < static_cast<int>(labels[j].size())) {
    return labels[j][level - 1];
  }
  return std::to_string(level);
}

void QualitativeSpace::validate() const {
  for (int mj : level_counts) {
    if (mj < 2) throw std::invalid_argument("qualitative factor needs >= 2 levels");
  }
  if (!labels.empty()) {
    if (labels.size() != level_counts.size())
      throw std::invalid_argument("label list does not match factor count");
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (static_cast<int>(labels[j].size()) != level_counts[j])
        throw std::invalid_argument("label count does not match level count");
    }
  }
}

Eigen::VectorXd DomainSpec::to_unit(const Eigen::VectorXd& user) const {
  if (user.size() != lower.size())
    throw std::invalid_argument("to_unit: dimension mismatch");
  return (user - lower).cwiseQuotient(upper - lower);
}

Eigen::VectorXd DomainSpec::from_unit(const Eigen::VectorXd& unit) const {
  if (unit.size() != lower.size())
    throw std::invalid_argument("from_unit: dimension mismatch");
  return lower + unit.cwiseProduct(upper - lower);
}

void DomainSpec::check_point(const MixedPoint& w) const {
  if (w.x.size() != lower.size())
    throw std::invalid_argument("point has wrong continuous dimension");
  if (static_cast<int>(w.z.size()) != qualitative.factor_count())
    throw std::invalid_argument("point has wrong qualitative dimension");
  for (int i = 0; i < w.x.size(); ++i) {
    if (!(w.x[i] >= -1e-9 && w.x[i] <= 1.0 + 1e-9))
      throw std::invalid_argument("unit-scale coordinate outside [0,1]");
  }
  for (std::size_t j = 0; j < w.z.size(); ++j) {
    if (w.z[j] < 1 || w.z[j] > qualitative.level_counts[j])
      throw std::invalid_argument("level index out of range");
  }
}

void DomainSpec::validate() const {
  if (lower.size() != upper.size())
    throw std::invalid_argument("bound vectors differ in length");
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("continuous bounds must satisfy lo < hi");
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw std::invalid_argument("continuous bounds must be finite");
  }
  qualitative.validate();
}

}  // namespace qqbo
