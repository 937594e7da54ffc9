/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/study.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qqbo/errors.hpp"
#include "qqbo/rng.hpp"

namespace qqbo {

namespace {

constexpr std::uint64_t kInitStream = 0x1417;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_u64(std::uint64_t v) { return std::to_string(v); }

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

StrategySpec make_strategy_spec(Strategy strategy, double rho) {
  StrategySpec spec;
  spec.strategy = strategy;
  spec.rho = rho;
  spec.label = strategy_name(strategy);
  if ((strategy == Strategy::AdaptiveCee || strategy == Strategy::Cee) && rho != 2.0) {
    std::ostringstream label;
    label << spec.label << "_rho" << rho;
    spec.label = label.str();
  }
  return spec;
}

std::vector<StrategySpec> parse_strategy_list(const std::string& list,
                                              double default_rho) {
  std::vector<StrategySpec> specs;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    double rho = default_rho;
    std::string name = token;
    if (const auto at = token.find('@'); at != std::string::npos) {
      name = token.substr(0, at);
      rho = std::stod(token.substr(at + 1));
    }
    specs.push_back(make_strategy_spec(strategy_from_name(name), rho));
  }
  if (specs.empty()) throw std::invalid_argument("strategy list is empty");
  return specs;
}

const std::vector<ReplicationOutcome>& StudyResult::rows_for(
    const std::string& label) const {
  for (std::size_t k = 0; k < config.strategies.size(); ++k) {
    if (config.strategies[k].label == label) return outcomes[k];
  }
  throw std::invalid_argument("no such strategy in study: " + label);
}

const StrategySummary& StudyResult::summary_for(const std::string& label) const {
  for (const auto& s : summaries) {
    if (s.label == label) return s;
  }
  throw std::invalid_argument("no such strategy in study: " + label);
}

CampaignConfig study_campaign_config(const BenchmarkFn& fn, const StrategySpec& spec,
                                     const StudyConfig& config,
                                     std::uint64_t replication_seed,
                                     int strategy_index) {
  CampaignConfig cc;
  cc.domain = fn.domain;
  cc.acquisition.strategy = spec.strategy;
  cc.acquisition.rho = spec.rho;
  cc.acquisition.alpha = config.alpha;
  cc.acquisition.sense = Sense::Min;
  cc.init.n_runs = config.n_init > 0 ? config.n_init : fn.default_init_runs;
  cc.init.plan = fn.default_plan;
  cc.init.rng_seed = derive_seed(replication_seed, kInitStream);
  cc.n_sequential = config.n_sequential >= 0 ? config.n_sequential : fn.default_sequential;
  cc.fit = config.fit;
  cc.rng_seed = derive_seed(replication_seed, 0x57A7 + strategy_index);
  cc.n_candidates = config.n_candidates;
  cc.polish = config.polish;
  return cc;
}

Campaign run_single_replication(const BenchmarkFn& fn, const StrategySpec& spec,
                                const StudyConfig& config,
                                std::uint64_t replication_seed, int strategy_index) {
  const CampaignConfig cc =
      study_campaign_config(fn, spec, config, replication_seed, strategy_index);
  return run_campaign([&fn](const MixedPoint& w) { return fn(w); }, cc);
}

StudyResult replicate_study(const BenchmarkFn& fn, const StudyConfig& config) {
  if (config.strategies.empty())
    throw std::invalid_argument("replicate_study: no strategies given");
  if (config.n_reps < 1) throw std::invalid_argument("replicate_study: n_reps >= 1");

  StudyResult result;
  result.function = fn.name;
  result.config = config;
  result.outcomes.assign(config.strategies.size(),
                         std::vector<ReplicationOutcome>(config.n_reps));

  std::atomic<int> next_rep{0};
  std::atomic<int> failures{0};

  auto worker = [&]() {
    while (true) {
      const int rep = next_rep.fetch_add(1);
      if (rep >= config.n_reps) break;
      const std::uint64_t rep_seed = derive_seed(config.seed, rep);
      for (std::size_t k = 0; k < config.strategies.size(); ++k) {
        ReplicationOutcome& row = result.outcomes[k][rep];
        row.replication = rep;
        row.seed = rep_seed;
        const auto start = std::chrono::steady_clock::now();
        try {
          const Campaign campaign = run_single_replication(
              fn, config.strategies[k], config, rep_seed, static_cast<int>(k));
          row.best_value = campaign.best_value();
        } catch (const NumericalFailure&) {
          row.failed = true;
          failures.fetch_add(1);
        }
        if (config.collect_timings) {
          row.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        }
      }
    }
  };

  int n_threads = config.n_threads > 0
                      ? config.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, config.n_reps));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  const int total_cells = config.n_reps * static_cast<int>(config.strategies.size());
  if (failures.load() * 20 > total_cells) {
    std::ostringstream msg;
    msg << "study failed: " << failures.load() << " of " << total_cells
        << " replications failed (> 5%)";
    throw NumericalFailure(msg.str());
  }

  for (std::size_t k = 0; k < config.strategies.size(); ++k) {
    result.summaries.push_back(
        summarize(config.strategies[k].label, result.outcomes[k]));
  }

  // Config fingerprint: FNV-1a over the identifying fields.
  std::ostringstream ident;
  ident << fn.name << '|' << config.seed << '|' << config.n_reps << '|'
        << config.n_init << '|' << config.n_sequential << '|' << config.alpha << '|'
        << config.n_candidates << '|' << config.polish;
  for (const auto& s : config.strategies) ident << '|' << s.label;
  std::uint64_t hash = 1469598103934665603ULL;
  for (const char c : ident.str()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  std::ostringstream fp;
  fp << std::hex << hash;
  result.fingerprint = fp.str();
  return result;
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

StrategySummary summarize(const std::string& label,
                          const std::vector<ReplicationOutcome>& rows) {
  StrategySummary s;
  s.label = label;
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.failed) {
      ++s.failed;
    } else {
      values.push_back(row.best_value);
    }
  }
  s.n = static_cast<int>(values.size());
  if (!values.empty()) {
    s.median = sample_quantile(values, 0.5);
    s.q1 = sample_quantile(values, 0.25);
    s.q3 = sample_quantile(values, 0.75);
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
  }
  return s;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string raw_csv_text(const StudyResult& result) {
  std::ostringstream out;
  out << "function,strategy,replication,seed,best_value,wall_ms\n";
  for (std::size_t k = 0; k < result.config.strategies.size(); ++k) {
    for (const auto& row : result.outcomes[k]) {
      out << result.function << ',' << result.config.strategies[k].label << ','
          << row.replication << ',' << format_u64(row.seed) << ','
          << format_double(row.failed ? std::numeric_limits<double>::quiet_NaN()
                                      : row.best_value)
          << ',' << format_double(row.wall_ms) << '\n';
    }
  }
  return out.str();
}

std::string summary_csv_text(const StudyResult& result) {
  std::ostringstream out;
  out << "function,strategy,n,failed,median,q1,q3,min,max\n";
  for (const auto& s : result.summaries) {
    out << result.function << ',' << s.label << ',' << s.n << ',' << s.failed << ','
        << format_double(s.median) << ',' << format_double(s.q1) << ','
        << format_double(s.q3) << ',' << format_double(s.min) << ','
        << format_double(s.max) << '\n';
  }
  return out.str();
}

std::string quantiles_csv_text(const StudyResult& result) {
  std::ostringstream out;
  out << "function,strategy,quantile,value\n";
  for (std::size_t k = 0; k < result.config.strategies.size(); ++k) {
    std::vector<double> values;
    for (const auto& row : result.outcomes[k]) {
      if (!row.failed) values.push_back(row.best_value);
    }
    for (int qi = 0; qi <= 20; ++qi) {
      const double q = qi * 0.05;
      out << result.function << ',' << result.config.strategies[k].label << ','
          << format_double(q) << ',' << format_double(sample_quantile(values, q))
          << '\n';
    }
  }
  return out.str();
}

nlohmann::json summary_json(const StudyResult& result) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    strategies.push_back({{"strategy", s.label},
                          {"n", s.n},
                          {"failed", s.failed},
                          {"median", s.median},
                          {"q1", s.q1},
                          {"q3", s.q3},
                          {"min", s.min},
                          {"max", s.max}});
  }
  return nlohmann::json{{"function", result.function},
                        {"fingerprint", result.fingerprint},
                        {"strategies", strategies}};
}

}  // namespace

void write_report(const StudyResult& result, const std::filesystem::path& dir,
                  ReportFormat format) {
  if (result.config.strategies.empty())
    throw std::invalid_argument("write_report: empty strategy list");
  std::filesystem::create_directories(dir);
  write_file(dir / "raw.csv", raw_csv_text(result));
  if (format == ReportFormat::Csv) {
    write_file(dir / "summary.csv", summary_csv_text(result));
    write_file(dir / "quantiles.csv", quantiles_csv_text(result));
  } else {
    write_file(dir / "summary.json", summary_json(result).dump(2) + "\n");
    nlohmann::json quantiles = nlohmann::json::array();
    for (std::size_t k = 0; k < result.config.strategies.size(); ++k) {
      std::vector<double> values;
      for (const auto& row : result.outcomes[k]) {
        if (!row.failed) values.push_back(row.best_value);
      }
      nlohmann::json qs = nlohmann::json::array();
      for (int qi = 0; qi <= 20; ++qi)
        qs.push_back({{"q", qi * 0.05}, {"value", sample_quantile(values, qi * 0.05)}});
      quantiles.push_back(
          {{"strategy", result.config.strategies[k].label}, {"quantiles", qs}});
    }
    write_file(dir / "quantiles.json", quantiles.dump(2) + "\n");
  }
}

StudyResult read_raw_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("raw csv: empty file");
  if (line != "function,strategy,replication,seed,best_value,wall_ms")
    throw IoError("raw csv: unexpected header");

  StudyResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) throw IoError("raw csv: malformed row");
    if (result.function.empty()) result.function = fields[0];
    std::size_t k = 0;
    for (; k < result.config.strategies.size(); ++k) {
      if (result.config.strategies[k].label == fields[1]) break;
    }
    if (k == result.config.strategies.size()) {
      StrategySpec spec;
      spec.label = fields[1];
      result.config.strategies.push_back(spec);
      result.outcomes.emplace_back();
    }
    ReplicationOutcome row;
    row.replication = std::stoi(fields[2]);
    row.seed = std::stoull(fields[3]);
    row.best_value = parse_double(fields[4]);
    row.failed = std::isnan(row.best_value);
    row.wall_ms = parse_double(fields[5]);
    result.outcomes[k].push_back(row);
  }
  for (std::size_t k = 0; k < result.config.strategies.size(); ++k) {
    result.summaries.push_back(
        summarize(result.config.strategies[k].label, result.outcomes[k]));
  }
  return result;
}

std::vector<MixedPoint> diagnostic_grid(const DomainSpec& domain, int per_axis) {
  if (domain.continuous_dim() != 1)
    throw std::invalid_argument("diagnostic_grid supports one continuous factor");
  if (per_axis < 2) throw std::invalid_argument("diagnostic_grid: need >= 2 points");
  std::vector<MixedPoint> grid;
  const auto combos = full_factorial(domain.qualitative);
  grid.reserve(combos.size() * per_axis);
  for (const auto& combo : combos) {
    for (int g = 0; g < per_axis; ++g) {
      Eigen::VectorXd x(1);
      x[0] = static_cast<double>(g) / (per_axis - 1);
      grid.push_back({x, combo});
    }
  }
  return grid;
}

RegionBounds region_snapshot(const AgpModel& model, const DomainSpec& domain,
                             int per_axis, double alpha) {
  const double beta = confidence_beta(
      model.data().size(), domain.qualitative.combination_count(), alpha);
  return adaptive_region(diagnostic_grid(domain, per_axis), model, beta);
}

void write_traces(const BenchmarkFn& fn, const StudyConfig& config, int n_traced,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const bool gridable = fn.domain.continuous_dim() == 1;
  for (std::size_t k = 0; k < config.strategies.size(); ++k) {
    const auto& spec = config.strategies[k];
    if (spec.strategy == Strategy::Ra) continue;
    for (int rep = 0; rep < n_traced && rep < config.n_reps; ++rep) {
      const std::uint64_t rep_seed = derive_seed(config.seed, rep);
      const CampaignConfig cc =
          study_campaign_config(fn, spec, config, rep_seed, static_cast<int>(k));
      Campaign campaign(cc);

      std::ostringstream trace;
      trace << "iteration,criterion,best_so_far,beta,region_size,pool_size,"
               "log_likelihood\n";
      std::ostringstream region_rows;
      region_rows << "iteration,combo,x,in_region\n";

      while (!campaign.exhausted()) {
        const MixedPoint w = campaign.ask();
        const bool sequential = campaign.last_model() != nullptr &&
                                campaign.iteration() >= cc.init.n_runs;
        campaign.tell(fn(w));
        const auto& rec = campaign.history().back();
        trace << campaign.iteration() << ',' << format_double(rec.criterion) << ','
              << format_double(campaign.best_value()) << ','
              << format_double(rec.beta) << ',' << rec.region_size << ','
              << rec.pool_size << ',' << format_double(rec.log_likelihood) << '\n';

        if (sequential && gridable && spec.strategy == Strategy::AdaptiveCee) {
          const RegionBounds snapshot = region_snapshot(
              *campaign.last_model(), fn.domain, 512, config.alpha);
          const auto grid = diagnostic_grid(fn.domain, 512);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            std::ostringstream combo;
            for (std::size_t jf = 0; jf < grid[i].z.size(); ++jf) {
              if (jf) combo << '|';
              combo << grid[i].z[jf];
            }
            region_rows << campaign.iteration() << ',' << combo.str() << ','
                        << format_double(grid[i].x[0]) << ','
                        << (snapshot.in_region[i] ? 1 : 0) << '\n';
          }
        }
      }

      std::ostringstream base;
      base << "trace_" << spec.label << "_rep" << rep << ".csv";
      write_file(dir / base.str(), trace.str());
      if (gridable && spec.strategy == Strategy::AdaptiveCee) {
        std::ostringstream rbase;
        rbase << "region_" << spec.label << "_rep" << rep << ".csv";
        write_file(dir / rbase.str(), region_rows.str());
      }
    }
  }
}

}  // namespace qqbo
