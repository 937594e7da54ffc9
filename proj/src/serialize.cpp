/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qqbo/errors.hpp"

namespace qqbo {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* what) {
  if (!j.is_object()) throw IoError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* k : allowed) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known)
      throw IoError(std::string(what) + ": unknown field '" + key + "'");
  }
}

const json& require(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw IoError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw IoError(std::string(what) + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw IoError(std::string(what) + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json optional_double(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double optional_double_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json mixed_point_to_json(const MixedPoint& w, const DomainSpec& domain) {
  json out;
  out["x"] = vector_to_json(domain.from_unit(w.x));
  out["x_unit"] = vector_to_json(w.x);
  out["z"] = w.z;
  json labels = json::array();
  for (std::size_t jf = 0; jf < w.z.size(); ++jf)
    labels.push_back(domain.qualitative.level_label(static_cast<int>(jf), w.z[jf]));
  out["z_labels"] = labels;
  return out;
}

MixedPoint mixed_point_from_json(const json& j, const DomainSpec& domain) {
  check_keys(j, {"x", "x_unit", "z", "z_labels"}, "point");
  MixedPoint w;
  w.x = vector_from_json(require(j, "x_unit", "point"), "point.x_unit");
  const json& z = require(j, "z", "point");
  if (!z.is_array()) throw IoError("point.z: expected an array");
  w.z.reserve(z.size());
  for (const auto& e : z) w.z.push_back(e.get<int>());
  domain.check_point(w);
  return w;
}

json kernel_params_to_json(const KernelParams& params) {
  json out;
  out["sigma2"] = vector_to_json(params.sigma2);
  json theta = json::array();
  for (Eigen::Index r = 0; r < params.theta.rows(); ++r)
    theta.push_back(vector_to_json(params.theta.row(r).transpose()));
  out["theta"] = theta;
  json angles = json::array();
  for (const auto& a : params.angles) angles.push_back(vector_to_json(a));
  out["angles"] = angles;
  return out;
}

KernelParams kernel_params_from_json(const json& j) {
  check_keys(j, {"sigma2", "theta", "angles"}, "kernel_params");
  KernelParams params;
  params.sigma2 = vector_from_json(require(j, "sigma2", "kernel_params"), "sigma2");
  const json& theta = require(j, "theta", "kernel_params");
  const Eigen::Index q = params.sigma2.size();
  if (!theta.is_array() || static_cast<Eigen::Index>(theta.size()) != q)
    throw IoError("kernel_params.theta: wrong shape");
  const Eigen::Index p = theta.empty() ? 0 : theta[0].size();
  params.theta.resize(q, p);
  for (Eigen::Index r = 0; r < q; ++r)
    params.theta.row(r) = vector_from_json(theta[r], "theta row").transpose();
  for (const auto& a : require(j, "angles", "kernel_params"))
    params.angles.push_back(vector_from_json(a, "angles"));
  return params;
}

json history_to_json(const HistoryRecord& rec, const DomainSpec& domain) {
  json out;
  out["point"] = mixed_point_to_json(rec.point, domain);
  out["criterion"] = optional_double(rec.criterion);
  out["beta"] = optional_double(rec.beta);
  out["region_size"] = rec.region_size < 0 ? json(nullptr) : json(rec.region_size);
  out["pool_size"] = rec.pool_size < 0 ? json(nullptr) : json(rec.pool_size);
  out["log_likelihood"] = optional_double(rec.log_likelihood);
  return out;
}

HistoryRecord history_from_json(const json& j, const DomainSpec& domain) {
  check_keys(j,
             {"point", "criterion", "beta", "region_size", "pool_size",
              "log_likelihood"},
             "history record");
  HistoryRecord rec;
  rec.point = mixed_point_from_json(require(j, "point", "history"), domain);
  rec.criterion = optional_double_from(require(j, "criterion", "history"));
  rec.beta = optional_double_from(require(j, "beta", "history"));
  const json& rs = require(j, "region_size", "history");
  rec.region_size = rs.is_null() ? -1 : rs.get<long>();
  const json& ps = require(j, "pool_size", "history");
  rec.pool_size = ps.is_null() ? -1 : ps.get<long>();
  rec.log_likelihood = optional_double_from(require(j, "log_likelihood", "history"));
  return rec;
}

}  // namespace

json domain_to_json(const DomainSpec& domain) {
  json continuous = json::array();
  for (int i = 0; i < domain.continuous_dim(); ++i) {
    json c;
    c["name"] = i < static_cast<int>(domain.continuous_names.size())
                    ? domain.continuous_names[i]
                    : "x" + std::to_string(i + 1);
    c["lo"] = domain.lower[i];
    c["hi"] = domain.upper[i];
    continuous.push_back(c);
  }
  json qualitative = json::array();
  for (int jf = 0; jf < domain.qualitative.factor_count(); ++jf) {
    json f;
    f["name"] = jf < static_cast<int>(domain.qualitative_names.size())
                    ? domain.qualitative_names[jf]
                    : "z" + std::to_string(jf + 1);
    json levels = json::array();
    for (int level = 1; level <= domain.qualitative.level_counts[jf]; ++level)
      levels.push_back(domain.qualitative.level_label(jf, level));
    f["levels"] = levels;
    qualitative.push_back(f);
  }
  return json{{"continuous", continuous}, {"qualitative", qualitative}};
}

DomainSpec domain_from_json(const json& j) {
  check_keys(j, {"continuous", "qualitative"}, "domain");
  const json& continuous = require(j, "continuous", "domain");
  const json& qualitative = require(j, "qualitative", "domain");
  if (!continuous.is_array() || !qualitative.is_array())
    throw IoError("domain: continuous/qualitative must be arrays");

  DomainSpec domain;
  domain.lower.resize(continuous.size());
  domain.upper.resize(continuous.size());
  for (std::size_t i = 0; i < continuous.size(); ++i) {
    check_keys(continuous[i], {"name", "lo", "hi"}, "domain.continuous");
    domain.lower[static_cast<Eigen::Index>(i)] =
        require(continuous[i], "lo", "continuous").get<double>();
    domain.upper[static_cast<Eigen::Index>(i)] =
        require(continuous[i], "hi", "continuous").get<double>();
    domain.continuous_names.push_back(
        continuous[i].value("name", "x" + std::to_string(i + 1)));
  }
  for (std::size_t jf = 0; jf < qualitative.size(); ++jf) {
    check_keys(qualitative[jf], {"name", "levels"}, "domain.qualitative");
    const json& levels = require(qualitative[jf], "levels", "qualitative");
    if (!levels.is_array() || levels.size() < 2)
      throw IoError("domain: each qualitative factor needs >= 2 levels");
    domain.qualitative.level_counts.push_back(static_cast<int>(levels.size()));
    std::vector<std::string> names;
    for (const auto& level : levels) {
      names.push_back(level.is_string() ? level.get<std::string>() : level.dump());
    }
    domain.qualitative.labels.push_back(std::move(names));
    domain.qualitative_names.push_back(
        qualitative[jf].value("name", "z" + std::to_string(jf + 1)));
  }
  domain.validate();
  return domain;
}

json campaign_config_to_json(const CampaignConfig& config) {
  json fit{{"n_starts", config.fit.n_starts},
           {"max_iters", config.fit.max_iters},
           {"tolerance", config.fit.tolerance},
           {"theta_lo", config.fit.theta_lo},
           {"theta_hi", config.fit.theta_hi},
           {"sigma2_lo_factor", config.fit.sigma2_lo_factor},
           {"sigma2_hi_factor", config.fit.sigma2_hi_factor},
           {"seed", config.fit.rng_seed}};
  json acquisition{{"strategy", strategy_name(config.acquisition.strategy)},
                   {"rho", config.acquisition.rho},
                   {"alpha", config.acquisition.alpha},
                   {"sense", config.acquisition.sense == Sense::Max ? "max" : "min"}};
  json init{{"n_runs", config.init.n_runs},
            {"plan", qualitative_plan_name(config.init.plan)},
            {"seed", config.init.rng_seed}};
  return json{{"domain", domain_to_json(config.domain)},
              {"acquisition", acquisition},
              {"init", init},
              {"n_sequential", config.n_sequential},
              {"fit", fit},
              {"seed", config.rng_seed},
              {"n_candidates", config.n_candidates},
              {"polish", config.polish}};
}

CampaignConfig campaign_config_from_json(const json& j) {
  check_keys(j,
             {"domain", "acquisition", "init", "n_sequential", "fit", "seed",
              "n_candidates", "polish"},
             "config");
  CampaignConfig config;
  config.domain = domain_from_json(require(j, "domain", "config"));

  const json& acq = require(j, "acquisition", "config");
  check_keys(acq, {"strategy", "rho", "alpha", "sense"}, "config.acquisition");
  config.acquisition.strategy =
      strategy_from_name(require(acq, "strategy", "acquisition").get<std::string>());
  config.acquisition.rho = require(acq, "rho", "acquisition").get<double>();
  config.acquisition.alpha = require(acq, "alpha", "acquisition").get<double>();
  const std::string sense = require(acq, "sense", "acquisition").get<std::string>();
  if (sense != "min" && sense != "max") throw IoError("config: sense must be min|max");
  config.acquisition.sense = sense == "max" ? Sense::Max : Sense::Min;

  const json& init = require(j, "init", "config");
  check_keys(init, {"n_runs", "plan", "seed"}, "config.init");
  config.init.n_runs = require(init, "n_runs", "init").get<int>();
  config.init.plan =
      qualitative_plan_from_name(require(init, "plan", "init").get<std::string>());
  config.init.rng_seed = require(init, "seed", "init").get<std::uint64_t>();

  config.n_sequential = require(j, "n_sequential", "config").get<int>();

  const json& fit = require(j, "fit", "config");
  check_keys(fit,
             {"n_starts", "max_iters", "tolerance", "theta_lo", "theta_hi",
              "sigma2_lo_factor", "sigma2_hi_factor", "seed"},
             "config.fit");
  config.fit.n_starts = require(fit, "n_starts", "fit").get<int>();
  config.fit.max_iters = require(fit, "max_iters", "fit").get<long>();
  config.fit.tolerance = require(fit, "tolerance", "fit").get<double>();
  config.fit.theta_lo = require(fit, "theta_lo", "fit").get<double>();
  config.fit.theta_hi = require(fit, "theta_hi", "fit").get<double>();
  config.fit.sigma2_lo_factor = require(fit, "sigma2_lo_factor", "fit").get<double>();
  config.fit.sigma2_hi_factor = require(fit, "sigma2_hi_factor", "fit").get<double>();
  config.fit.rng_seed = require(fit, "seed", "fit").get<std::uint64_t>();

  config.rng_seed = require(j, "seed", "config").get<std::uint64_t>();
  config.n_candidates = require(j, "n_candidates", "config").get<int>();
  config.polish = require(j, "polish", "config").get<bool>();
  config.validate();
  return config;
}

json point_to_json(const MixedPoint& w, const DomainSpec& domain) {
  return mixed_point_to_json(w, domain);
}

struct CampaignSerializer {
  static json to_json(const Campaign& c) {
    const DomainSpec& domain = c.config_.domain;
    json points = json::array();
    for (const auto& w : c.data_.points) points.push_back(mixed_point_to_json(w, domain));
    json responses = json::array();
    for (Eigen::Index i = 0; i < c.data_.y.size(); ++i) responses.push_back(c.data_.y[i]);
    json queue = json::array();
    for (const auto& w : c.queue_) queue.push_back(mixed_point_to_json(w, domain));
    json history = json::array();
    for (const auto& rec : c.history_) history.push_back(history_to_json(rec, domain));

    std::ostringstream rng_state;
    rng_state << c.rng_;

    json out;
    out["version"] = 1;
    out["config"] = campaign_config_to_json(c.config_);
    out["points"] = points;
    out["responses"] = responses;
    out["queue"] = queue;
    out["pending"] = c.awaiting_ ? history_to_json(c.pending_record_, domain)
                                 : json(nullptr);
    out["iteration"] = c.iteration_;
    out["phase"] = c.phase_ == Phase::AwaitingResponse ? "awaiting_response" : "ready";
    out["rng_state"] = rng_state.str();
    out["warm_start"] =
        c.warm_params_ ? kernel_params_to_json(*c.warm_params_) : json(nullptr);
    out["history"] = history;
    return out;
  }

  static Campaign from_json(const json& j) {
    check_keys(j,
               {"version", "config", "points", "responses", "queue", "pending",
                "iteration", "phase", "rng_state", "warm_start", "history"},
               "campaign");
    const int version = require(j, "version", "campaign").get<int>();
    if (version != 1) throw IoError("campaign: unsupported version");

    Campaign c;
    c.config_ = campaign_config_from_json(require(j, "config", "campaign"));
    const DomainSpec& domain = c.config_.domain;

    for (const auto& pj : require(j, "points", "campaign"))
      c.data_.points.push_back(mixed_point_from_json(pj, domain));
    const json& responses = require(j, "responses", "campaign");
    c.data_.y.resize(responses.size());
    for (std::size_t i = 0; i < responses.size(); ++i)
      c.data_.y[static_cast<Eigen::Index>(i)] = responses[i].get<double>();
    if (c.data_.points.size() != static_cast<std::size_t>(c.data_.y.size()))
      throw IoError("campaign: points and responses differ in length");

    for (const auto& pj : require(j, "queue", "campaign"))
      c.queue_.push_back(mixed_point_from_json(pj, domain));

    c.iteration_ = require(j, "iteration", "campaign").get<int>();
    if (c.iteration_ != static_cast<int>(c.data_.points.size()))
      throw IoError("campaign: iteration does not match evaluated points");

    const std::string phase = require(j, "phase", "campaign").get<std::string>();
    if (phase == "ready") {
      c.phase_ = Phase::Ready;
    } else if (phase == "awaiting_response") {
      c.phase_ = Phase::AwaitingResponse;
    } else {
      throw IoError("campaign: invalid phase");
    }

    const json& pending = require(j, "pending", "campaign");
    if (c.phase_ == Phase::AwaitingResponse) {
      if (pending.is_null()) throw IoError("campaign: awaiting phase without pending point");
      c.pending_record_ = history_from_json(pending, domain);
      c.awaiting_ = c.pending_record_.point;
    } else if (!pending.is_null()) {
      throw IoError("campaign: pending point in ready phase");
    }

    std::istringstream rng_state(require(j, "rng_state", "campaign").get<std::string>());
    rng_state >> c.rng_;
    if (rng_state.fail()) throw IoError("campaign: invalid rng state");

    const json& warm = require(j, "warm_start", "campaign");
    if (!warm.is_null()) c.warm_params_ = kernel_params_from_json(warm);

    for (const auto& hj : require(j, "history", "campaign"))
      c.history_.push_back(history_from_json(hj, domain));
    if (c.history_.size() != static_cast<std::size_t>(c.iteration_))
      throw IoError("campaign: history length does not match iteration count");

    if (c.iteration_ + static_cast<int>(c.queue_.size()) +
            (c.awaiting_ ? 1 : 0) > c.config_.total_budget() &&
        c.config_.acquisition.strategy != Strategy::Ra)
      throw IoError("campaign: more points than the configured budget");

    for (Eigen::Index i = 0; i < c.data_.y.size(); ++i) {
      if (c.data_.y[i] < c.best_value_) {
        c.best_value_ = c.data_.y[i];
        c.best_point_ = c.data_.points[static_cast<std::size_t>(i)];
      }
    }
    return c;
  }
};

json campaign_to_json(const Campaign& campaign) {
  return CampaignSerializer::to_json(campaign);
}

Campaign campaign_from_json(const json& j) { return CampaignSerializer::from_json(j); }

void save_campaign(const Campaign& campaign, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open '" + file.string() + "' for writing");
  out << campaign_to_json(campaign).dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

Campaign load_campaign(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("invalid campaign file: " + std::string(e.what()));
  }
  return campaign_from_json(j);
}

DomainSpec load_domain(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("invalid domain file: " + std::string(e.what()));
  }
  return domain_from_json(j);
}

}  // namespace qqbo
