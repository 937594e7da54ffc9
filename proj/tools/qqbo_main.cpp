/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "qqbo/benchmarks.hpp"
#include "qqbo/campaign.hpp"
#include "qqbo/errors.hpp"
#include "qqbo/rng.hpp"
#include "qqbo/serialize.hpp"
#include "qqbo/study.hpp"

namespace {

using nlohmann::json;

struct InitArgs {
  std::string domain_file;
  std::string out_file;
  int n_init = 0;
  int n_sequential = 0;
  std::uint64_t seed = 0;
  std::string strategy = "adaptive_cee";
  double rho = 2.0;
  double alpha = 0.05;
  std::string sense = "min";
  std::string plan = "auto";
  int n_candidates = 200;
  bool polish = false;
};

struct BenchArgs {
  std::string function;
  std::string strategies = "adaptive_cee,ei,mu,si,ra";
  int reps = 100;
  std::string budget;  // "I+S"
  std::uint64_t seed = 0;
  std::string out_dir;
  double rho = 2.0;
  double alpha = 0.05;
  int n_candidates = 200;
  int fit_starts = 5;
  long fit_iters = 0;
  int threads = 0;
  bool timings = false;
  int trace = 0;
  bool polish = false;
  std::string format = "csv";
};

qqbo::QualitativePlan resolve_plan(const std::string& plan,
                                   const qqbo::DomainSpec& domain, int n_init) {
  if (plan != "auto") return qqbo::qualitative_plan_from_name(plan);
  const auto& space = domain.qualitative;
  if (n_init == space.combination_count()) return qqbo::QualitativePlan::FullFactorial;
  const bool all3 = std::all_of(space.level_counts.begin(), space.level_counts.end(),
                                [](int m) { return m == 3; });
  if (space.factor_count() == 3 && all3 && n_init == 9)
    return qqbo::QualitativePlan::Fractional3Level;
  return qqbo::QualitativePlan::Random;
}

json point_report(const qqbo::Campaign& campaign, const qqbo::MixedPoint& w) {
  json out = qqbo::point_to_json(w, campaign.config().domain);
  out["iteration"] = campaign.iteration();
  out["remaining"] = campaign.config().total_budget() - campaign.iteration() - 1;
  return out;
}

int cmd_init(const InitArgs& args) {
  qqbo::CampaignConfig config;
  config.domain = qqbo::load_domain(args.domain_file);
  config.acquisition.strategy = qqbo::strategy_from_name(args.strategy);
  config.acquisition.rho = args.rho;
  config.acquisition.alpha = args.alpha;
  config.acquisition.sense = args.sense == "max" ? qqbo::Sense::Max : qqbo::Sense::Min;
  config.init.n_runs = args.n_init;
  config.init.plan = resolve_plan(args.plan, config.domain, args.n_init);
  config.init.rng_seed = qqbo::derive_seed(args.seed, 1);
  config.n_sequential = args.n_sequential;
  config.rng_seed = args.seed;
  config.n_candidates = args.n_candidates;
  config.polish = args.polish;

  qqbo::Campaign campaign(config);
  qqbo::save_campaign(campaign, args.out_file);

  json out{{"campaign", args.out_file},
           {"plan", qqbo::qualitative_plan_name(config.init.plan)},
           {"initial_runs", config.init.n_runs},
           {"n_sequential", config.n_sequential}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_suggest(const std::string& file, const std::string& strategy, double rho,
                double alpha, bool has_override) {
  qqbo::Campaign campaign = qqbo::load_campaign(file);
  if (has_override) {
    qqbo::AcquisitionConfig acq = campaign.config().acquisition;
    if (!strategy.empty()) acq.strategy = qqbo::strategy_from_name(strategy);
    if (rho >= 0.0) acq.rho = rho;
    if (alpha > 0.0) acq.alpha = alpha;
    campaign.set_acquisition(acq);
  }
  const qqbo::MixedPoint w = campaign.ask();
  qqbo::save_campaign(campaign, file);
  std::cout << point_report(campaign, w).dump(2) << "\n";
  return 0;
}

int cmd_tell(const std::string& file, double y) {
  qqbo::Campaign campaign = qqbo::load_campaign(file);
  campaign.tell(y);
  qqbo::save_campaign(campaign, file);
  json out{{"n", campaign.iteration()},
           {"best_value", campaign.best_value_user()},
           {"done", campaign.exhausted()}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_run_bench(const BenchArgs& args) {
  const qqbo::BenchmarkFn& fn = qqbo::benchmark_by_name(args.function);

  qqbo::StudyConfig config;
  config.strategies = qqbo::parse_strategy_list(args.strategies, args.rho);
  config.n_reps = args.reps;
  config.seed = args.seed;
  config.alpha = args.alpha;
  config.n_candidates = args.n_candidates;
  config.fit.n_starts = args.fit_starts;
  config.fit.max_iters = args.fit_iters;
  config.polish = args.polish;
  config.collect_timings = args.timings;
  config.n_threads = args.threads;
  if (!args.budget.empty()) {
    const auto plus = args.budget.find('+');
    if (plus == std::string::npos)
      throw std::invalid_argument("budget must look like \"9+6\" (initial+sequential)");
    config.n_init = std::stoi(args.budget.substr(0, plus));
    config.n_sequential = std::stoi(args.budget.substr(plus + 1));
  }

  const auto start = std::chrono::steady_clock::now();
  const qqbo::StudyResult result = qqbo::replicate_study(fn, config);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  qqbo::write_report(result, args.out_dir,
                     args.format == "json" ? qqbo::ReportFormat::Json
                                           : qqbo::ReportFormat::Csv);
  if (args.trace > 0) qqbo::write_traces(fn, config, args.trace, args.out_dir);

  std::cout << "study " << result.fingerprint << " (" << fn.name << ", "
            << config.n_reps << " reps) finished in " << secs << " s\n";
  for (const auto& s : result.summaries) {
    std::cout << "  " << s.label << ": median " << s.median << "  iqr [" << s.q1
              << ", " << s.q3 << "]  min " << s.min << "  failed " << s.failed
              << "\n";
  }
  std::cout << "report written to " << args.out_dir << "\n";
  return 0;
}

int cmd_oracle(const std::string& function, double density, long max_evals) {
  const qqbo::BenchmarkFn& fn = qqbo::benchmark_by_name(function);
  const qqbo::BruteForceResult res = qqbo::brute_force_min(fn, density, max_evals);
  json out = qqbo::point_to_json(res.argmin, fn.domain);
  out["value"] = res.value;
  out["evaluations"] = res.evaluations;
  if (fn.known_min) out["reported_minimum"] = fn.known_min->value;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& format) {
  const qqbo::StudyResult result =
      qqbo::read_raw_csv(std::filesystem::path(in_dir) / "raw.csv");
  // Re-emit summary/quantile files next to the raw data.
  const auto fmt = format == "json" ? qqbo::ReportFormat::Json : qqbo::ReportFormat::Csv;
  qqbo::write_report(result, in_dir, fmt);
  for (const auto& s : result.summaries) {
    std::cout << s.label << ": n " << s.n << "  median " << s.median << "  iqr ["
              << s.q1 << ", " << s.q3 << "]\n";
  }
  return 0;
}

int fail(const char* category, const std::string& message, int code) {
  json err{{"error", {{"category", category}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential design of computer experiments with quantitative and "
               "qualitative factors"};
  app.require_subcommand(1);

  InitArgs init_args;
  auto* init = app.add_subcommand("init", "Create a campaign from a domain file");
  init->add_option("--domain", init_args.domain_file, "Domain spec (JSON)")->required();
  init->add_option("--n-init", init_args.n_init, "Initial design size")->required();
  init->add_option("--n-seq", init_args.n_sequential, "Sequential budget");
  init->add_option("--seed", init_args.seed, "RNG seed");
  init->add_option("--out", init_args.out_file, "Campaign file to create")->required();
  init->add_option("--strategy", init_args.strategy,
                   "adaptive_cee|cee|ei|mu|si|ra");
  init->add_option("--rho", init_args.rho, "CEE exploration weight");
  init->add_option("--alpha", init_args.alpha, "Region confidence level");
  init->add_option("--sense", init_args.sense, "min|max");
  init->add_option("--plan", init_args.plan,
                   "auto|full_factorial|fractional_3level|random");
  init->add_option("--nc", init_args.n_candidates, "Candidates per level combination");
  init->add_flag("--polish", init_args.polish, "Refine the winning x coordinate-wise");

  std::string campaign_file;
  std::string sg_strategy;
  double sg_rho = -1.0, sg_alpha = -1.0;
  auto* suggest = app.add_subcommand("suggest", "Propose the next point (ask)");
  suggest->add_option("--campaign", campaign_file, "Campaign file")->required();
  auto* sg_s = suggest->add_option("--strategy", sg_strategy, "Override strategy");
  auto* sg_r = suggest->add_option("--rho", sg_rho, "Override rho");
  auto* sg_a = suggest->add_option("--alpha", sg_alpha, "Override alpha");

  std::string tell_file;
  double tell_y = 0.0;
  auto* tell = app.add_subcommand("tell", "Record the response of the pending point");
  tell->add_option("--campaign", tell_file, "Campaign file")->required();
  tell->add_option("--y", tell_y, "Observed response")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("run-bench", "Run a replication study");
  bench->add_option("--function", bench_args.function, "example1|example2|example3")
      ->required();
  bench->add_option("--strategies", bench_args.strategies,
                    "Comma list; name@rho overrides rho per arm");
  bench->add_option("--reps", bench_args.reps, "Replications");
  bench->add_option("--budget", bench_args.budget, "\"I+S\" initial+sequential runs");
  bench->add_option("--seed", bench_args.seed, "Master seed");
  bench->add_option("--out", bench_args.out_dir, "Report directory")->required();
  bench->add_option("--rho", bench_args.rho, "Default CEE weight");
  bench->add_option("--alpha", bench_args.alpha, "Region confidence level");
  bench->add_option("--nc", bench_args.n_candidates, "Candidates per level combination");
  bench->add_option("--fit-starts", bench_args.fit_starts, "Optimizer multi-starts");
  bench->add_option("--fit-iters", bench_args.fit_iters,
                    "Objective evaluations per start (0 = auto)");
  bench->add_option("--threads", bench_args.threads, "Worker threads (0 = auto)");
  bench->add_flag("--timings", bench_args.timings,
                  "Record wall times in raw.csv (breaks byte reproducibility)");
  bench->add_option("--trace", bench_args.trace,
                    "Emit per-iteration traces for the first N replications");
  bench->add_flag("--polish", bench_args.polish, "Refine winning x coordinate-wise");
  bench->add_option("--format", bench_args.format, "csv|json summary format");

  std::string oracle_fn;
  double oracle_density = 1e-3;
  long oracle_max_evals = 10'000'000;
  auto* oracle = app.add_subcommand("oracle", "Brute-force minimum of a benchmark");
  oracle->add_option("--function", oracle_fn, "example1|example2|example3")->required();
  oracle->add_option("--density", oracle_density, "Unit-scale grid step")->required();
  oracle->add_option("--max-evals", oracle_max_evals, "Evaluation budget");

  std::string report_dir, report_format = "csv";
  auto* report = app.add_subcommand("report", "Recompute summaries from raw.csv");
  report->add_option("--in", report_dir, "Directory holding raw.csv")->required();
  report->add_option("--format", report_format, "csv|json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*init) return cmd_init(init_args);
    if (*suggest)
      return cmd_suggest(campaign_file, sg_strategy, sg_rho, sg_alpha,
                         *sg_s || *sg_r || *sg_a);
    if (*tell) return cmd_tell(tell_file, tell_y);
    if (*bench) return cmd_run_bench(bench_args);
    if (*oracle) return cmd_oracle(oracle_fn, oracle_density, oracle_max_evals);
    if (*report) return cmd_report(report_dir, report_format);
  } catch (const qqbo::ProtocolError& e) {
    return fail("protocol", e.what(), 3);
  } catch (const qqbo::BudgetError& e) {
    return fail("budget", e.what(), 4);
  } catch (const qqbo::FitFailure& e) {
    return fail("numeric", e.what(), 5);
  } catch (const qqbo::NumericalFailure& e) {
    return fail("numeric", e.what(), 5);
  } catch (const qqbo::IoError& e) {
    return fail("io", e.what(), 6);
  } catch (const std::invalid_argument& e) {
    return fail("invalid_argument", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 10);
  }
  return 0;
}
