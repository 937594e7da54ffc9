/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qqbo/rng.hpp"
#include "qqbo/study.hpp"

using namespace qqbo;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StudyConfig small_study(std::uint64_t seed) {
  StudyConfig config;
  config.strategies = parse_strategy_list("adaptive_cee,mu,ra");
  config.n_reps = 3;
  config.n_init = 3;
  config.n_sequential = 2;
  config.seed = seed;
  config.n_candidates = 40;
  config.fit.n_starts = 2;
  config.fit.max_iters = 600;
  return config;
}

}  // namespace

TEST_SUITE_BEGIN("study");

TEST_CASE("strategy list parsing") {
  const auto specs = parse_strategy_list("adaptive_cee,ei,adaptive_cee@0.5");
  REQUIRE(specs.size() == 3);
  CHECK(specs[0].label == "adaptive_cee");
  CHECK(specs[0].rho == doctest::Approx(2.0));
  CHECK(specs[1].strategy == Strategy::Ei);
  CHECK(specs[2].rho == doctest::Approx(0.5));
  CHECK(specs[2].label == "adaptive_cee_rho0.5");
  CHECK_THROWS_AS(parse_strategy_list(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy_list("bogus"), std::invalid_argument);
}

TEST_CASE("sample_quantile is the type-7 estimator") {
  CHECK(sample_quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
  CHECK(sample_quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == doctest::Approx(1.0));
  CHECK(sample_quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == doctest::Approx(4.0));
  CHECK(sample_quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.75));
  CHECK(sample_quantile({7.5}, 0.33) == doctest::Approx(7.5));
}

TEST_CASE("replications share initial designs across strategies") {
  const BenchmarkFn& fn = benchmark_by_name("example1");
  const StudyConfig config = small_study(77);
  const std::uint64_t rep_seed = derive_seed(config.seed, 0);

  const CampaignConfig a = study_campaign_config(fn, config.strategies[0], config,
                                                 rep_seed, 0);
  const CampaignConfig b = study_campaign_config(fn, config.strategies[1], config,
                                                 rep_seed, 1);
  CHECK(a.init.rng_seed == b.init.rng_seed);
  CHECK(a.rng_seed != b.rng_seed);

  const auto da = initial_design(a.init, a.domain);
  const auto db = initial_design(b.init, b.domain);
  for (std::size_t t = 0; t < da.size(); ++t) {
    CHECK(da[t].x == db[t].x);
    CHECK(da[t].z == db[t].z);
  }
}

TEST_CASE("replicate_study shapes, determinism, and replays") {
  const BenchmarkFn& fn = benchmark_by_name("example1");
  const StudyConfig config = small_study(99);
  const StudyResult result = replicate_study(fn, config);

  REQUIRE(result.outcomes.size() == 3);
  for (const auto& rows : result.outcomes) CHECK(rows.size() == 3);
  CHECK(result.summaries.size() == 3);
  CHECK_FALSE(result.fingerprint.empty());

  SUBCASE("single-replication study emits one row per strategy") {
    StudyConfig single = config;
    single.n_reps = 1;
    const StudyResult one = replicate_study(fn, single);
    for (const auto& rows : one.outcomes) CHECK(rows.size() == 1);
  }

  SUBCASE("a recorded seed replays to the same best value") {
    const ReplicationOutcome& row = result.outcomes[1][2];  // mu, rep 2
    const Campaign replay =
        run_single_replication(fn, config.strategies[1], config, row.seed, 1);
    CHECK(replay.best_value() == doctest::Approx(row.best_value).epsilon(1e-15));
  }

  SUBCASE("reports are byte-identical across reruns") {
    const StudyResult again = replicate_study(fn, config);
    const auto dir_a = std::filesystem::temp_directory_path() / "qqbo_study_a";
    const auto dir_b = std::filesystem::temp_directory_path() / "qqbo_study_b";
    write_report(result, dir_a);
    write_report(again, dir_b);
    CHECK(slurp(dir_a / "raw.csv") == slurp(dir_b / "raw.csv"));
    CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));
    CHECK(slurp(dir_a / "quantiles.csv") == slurp(dir_b / "quantiles.csv"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
  }

  SUBCASE("raw csv has strategies x replications rows and recomputes exactly") {
    const auto dir = std::filesystem::temp_directory_path() / "qqbo_study_c";
    write_report(result, dir);
    const std::string raw = slurp(dir / "raw.csv");
    const long rows = std::count(raw.begin(), raw.end(), '\n') - 1;
    CHECK(rows == 9);

    const StudyResult reread = read_raw_csv(dir / "raw.csv");
    REQUIRE(reread.summaries.size() == result.summaries.size());
    for (std::size_t k = 0; k < result.summaries.size(); ++k) {
      CHECK(reread.summaries[k].label == result.summaries[k].label);
      CHECK(reread.summaries[k].median == result.summaries[k].median);
      CHECK(reread.summaries[k].q1 == result.summaries[k].q1);
      CHECK(reread.summaries[k].q3 == result.summaries[k].q3);
      CHECK(reread.summaries[k].min == result.summaries[k].min);
      CHECK(reread.summaries[k].max == result.summaries[k].max);
    }
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("empty strategy list is rejected") {
  StudyConfig config;
  config.n_reps = 1;
  CHECK_THROWS_AS(replicate_study(benchmark_by_name("example1"), config),
                  std::invalid_argument);
}

TEST_CASE("json report format") {
  const BenchmarkFn& fn = benchmark_by_name("example1");
  StudyConfig config = small_study(123);
  config.n_reps = 2;
  const StudyResult result = replicate_study(fn, config);
  const auto dir = std::filesystem::temp_directory_path() / "qqbo_study_json";
  write_report(result, dir, ReportFormat::Json);
  CHECK(std::filesystem::exists(dir / "raw.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "quantiles.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("diagnostic grid and region snapshots") {
  const BenchmarkFn& fn = benchmark_by_name("example1");
  const auto grid = diagnostic_grid(fn.domain, 512);
  CHECK(grid.size() == 3 * 512);
  CHECK(grid.front().x[0] == doctest::Approx(0.0));
  CHECK(grid.back().x[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(diagnostic_grid(benchmark_by_name("example2").domain, 16),
                  std::invalid_argument);
}

TEST_CASE("trace emission for example1") {
  const BenchmarkFn& fn = benchmark_by_name("example1");
  StudyConfig config = small_study(7);
  config.n_reps = 1;
  config.strategies = parse_strategy_list("adaptive_cee");
  const auto dir = std::filesystem::temp_directory_path() / "qqbo_traces";
  write_traces(fn, config, 1, dir);

  const std::string trace = slurp(dir / "trace_adaptive_cee_rep0.csv");
  CHECK(trace.rfind("iteration,criterion,best_so_far,beta,region_size,pool_size,"
                    "log_likelihood\n", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 1 + 3 + 2);

  const std::string region = slurp(dir / "region_adaptive_cee_rep0.csv");
  CHECK(region.rfind("iteration,combo,x,in_region\n", 0) == 0);
  // Two sequential iterations, 3*512 grid rows each.
  CHECK(std::count(region.begin(), region.end(), '\n') == 1 + 2 * 3 * 512);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
