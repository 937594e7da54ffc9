/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <algorithm>
#include <set>

#include "qqbo/design.hpp"
#include "qqbo/rng.hpp"

using namespace qqbo;

namespace {

/// Exact stratification check: scaling a column by n and ceiling it must
/// produce the permutation 1..n.
bool is_latin_column(const Eigen::VectorXd& column) {
  const int n = static_cast<int>(column.size());
  std::vector<int> strata;
  for (int i = 0; i < n; ++i)
    strata.push_back(static_cast<int>(std::ceil(column[i] * n)));
  std::sort(strata.begin(), strata.end());
  for (int i = 0; i < n; ++i) {
    if (strata[i] != i + 1) return false;
  }
  return true;
}

DomainSpec example1_domain() {
  DomainSpec d;
  d.lower = Eigen::VectorXd::Zero(1);
  d.upper = Eigen::VectorXd::Ones(1);
  d.qualitative.level_counts = {3};
  return d;
}

}  // namespace

TEST_SUITE_BEGIN("design");

TEST_CASE("random_lhd stratification and determinism") {
  auto rng = make_engine(99);
  const Eigen::MatrixXd one = random_lhd(1, 2, rng);
  CHECK(one.rows() == 1);
  CHECK(one(0, 0) >= 0.0);
  CHECK(one(0, 1) <= 1.0);

  for (const auto [n, p] : {std::pair{5, 3}, std::pair{16, 2}, std::pair{50, 4}}) {
    const Eigen::MatrixXd design = random_lhd(n, p, rng);
    for (int col = 0; col < p; ++col) CHECK(is_latin_column(design.col(col)));
  }

  auto rng_a = make_engine(7);
  auto rng_b = make_engine(7);
  CHECK(random_lhd(12, 3, rng_a) == random_lhd(12, 3, rng_b));
}

TEST_CASE("full_factorial enumerates every combination") {
  QualitativeSpace one;
  one.level_counts = {3};
  CHECK(full_factorial(one) ==
        std::vector<std::vector<int>>{{1}, {2}, {3}});

  QualitativeSpace two;
  two.level_counts = {2, 2};
  const auto rows = full_factorial(two);
  CHECK(rows.size() == 4);
  CHECK(std::set<std::vector<int>>(rows.begin(), rows.end()).size() == 4);

  QualitativeSpace three;
  three.level_counts = {3, 3, 3};
  CHECK(full_factorial(three).size() == 27);
}

TEST_CASE("fractional factorial is balanced with full two-factor projections") {
  const auto rows = fractional_factorial_3level();
  CHECK(rows.size() == 9);

  for (int factor = 0; factor < 3; ++factor) {
    int counts[3] = {0, 0, 0};
    for (const auto& row : rows) ++counts[row[factor] - 1];
    CHECK(counts[0] == 3);
    CHECK(counts[1] == 3);
    CHECK(counts[2] == 3);
  }

  for (const auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    std::set<std::pair<int, int>> projection;
    for (const auto& row : rows) projection.insert({row[a], row[b]});
    CHECK(projection.size() == 9);
  }

  CHECK_THROWS_AS(fractional_factorial_3level(2), std::invalid_argument);
}

TEST_CASE("initial_design pairs plans with LHD rows") {
  SUBCASE("full factorial covers all levels") {
    InitialDesignSpec spec{3, QualitativePlan::FullFactorial, 5};
    const auto points = initial_design(spec, example1_domain());
    CHECK(points.size() == 3);
    std::set<int> levels;
    for (const auto& w : points) levels.insert(w.z[0]);
    CHECK(levels == std::set<int>{1, 2, 3});
  }

  SUBCASE("fractional plan yields the 9-run design") {
    DomainSpec domain;
    domain.lower = Eigen::VectorXd::Zero(3);
    domain.upper = Eigen::VectorXd::Ones(3);
    domain.qualitative.level_counts = {3, 3, 3};
    InitialDesignSpec spec{9, QualitativePlan::Fractional3Level, 11};
    const auto points = initial_design(spec, domain);
    CHECK(points.size() == 9);
    const auto plan = fractional_factorial_3level();
    for (int t = 0; t < 9; ++t) CHECK(points[t].z == plan[t]);
  }

  SUBCASE("seed reproducibility") {
    InitialDesignSpec spec{3, QualitativePlan::FullFactorial, 123};
    const auto a = initial_design(spec, example1_domain());
    const auto b = initial_design(spec, example1_domain());
    for (int t = 0; t < 3; ++t) {
      CHECK(a[t].x == b[t].x);
      CHECK(a[t].z == b[t].z);
    }
  }

  SUBCASE("size mismatch is rejected") {
    InitialDesignSpec spec{4, QualitativePlan::FullFactorial, 1};
    CHECK_THROWS_AS(initial_design(spec, example1_domain()), std::invalid_argument);
  }
}

TEST_CASE("candidate_pool covers combinations and excludes training points") {
  const DomainSpec domain = example1_domain();
  Dataset data;
  data.points.push_back({Eigen::VectorXd::Constant(1, 0.25), {1}});
  data.points.push_back({Eigen::VectorXd::Constant(1, 0.75), {2}});
  data.y.resize(2);
  data.y << 1.0, -1.0;

  auto rng = make_engine(17);
  const CandidateSet pool = candidate_pool(data, domain, 100, rng);

  CHECK(pool.points.size() >= 300);  // 3 combos x 100, minus rare dedups
  std::set<int> combos;
  for (const auto& w : pool.points) combos.insert(w.z[0]);
  CHECK(combos == std::set<int>{1, 2, 3});

  // The incumbent best x (0.75) is re-crossed with every combination but
  // never duplicates its own training point.
  int crossings = 0;
  for (const auto& w : pool.points) {
    const bool at_best_x = std::abs(w.x[0] - 0.75) < 1e-12;
    if (at_best_x) ++crossings;
    CHECK_FALSE((w.z == data.points[1].z && at_best_x));
  }
  CHECK(crossings >= 2);

  auto rng_a = make_engine(29);
  auto rng_b = make_engine(29);
  const CandidateSet pa = candidate_pool(data, domain, 50, rng_a);
  const CandidateSet pb = candidate_pool(data, domain, 50, rng_b);
  REQUIRE(pa.points.size() == pb.points.size());
  for (std::size_t i = 0; i < pa.points.size(); ++i) {
    CHECK(pa.points[i].x == pb.points[i].x);
    CHECK(pa.points[i].z == pb.points[i].z);
  }
}

TEST_SUITE_END();
