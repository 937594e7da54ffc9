/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qqbo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qqbo {

namespace {

struct Simplex {
  std::vector<Eigen::VectorXd> x;
  std::vector<double> f;

  void sort() {
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    std::vector<Eigen::VectorXd> xs(x.size());
    std::vector<double> fs(f.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      xs[k] = std::move(x[idx[k]]);
      fs[k] = f[idx[k]];
    }
    x = std::move(xs);
    f = std::move(fs);
  }
};

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& start,
                           const NelderMeadOptions& options) {
  const int d = static_cast<int>(start.size());
  const long max_evals =
      options.max_evaluations > 0 ? options.max_evaluations : 600L * std::max(d, 1);

  MinimizeResult best;
  best.x = start;
  best.value = std::numeric_limits<double>::infinity();
  long evals = 0;

  auto eval = [&](const Eigen::VectorXd& v) {
    ++evals;
    double fv = f(v);
    if (!std::isfinite(fv)) fv = std::numeric_limits<double>::infinity();
    if (fv < best.value) {
      best.value = fv;
      best.x = v;
    }
    return fv;
  };

  // Standard reflection/expansion/contraction/shrink coefficients.
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;

  Eigen::VectorXd seed = start;
  for (int round = 0; round <= options.restarts && evals < max_evals; ++round) {
    Simplex s;
    s.x.reserve(d + 1);
    s.x.push_back(seed);
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXd v = seed;
      v[i] += options.initial_step;
      s.x.push_back(std::move(v));
    }
    s.f.resize(d + 1);
    for (int i = 0; i <= d && evals < max_evals; ++i) s.f[i] = eval(s.x[i]);
    s.sort();

    while (evals < max_evals) {
      const double spread = std::abs(s.f[d] - s.f[0]);
      if (spread <= options.f_tolerance * (1.0 + std::abs(s.f[0]))) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < d; ++i) centroid += s.x[i];
      centroid /= d;

      Eigen::VectorXd xr = centroid + alpha * (centroid - s.x[d]);
      const double fr = eval(xr);

      if (fr < s.f[0]) {
        Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          s.x[d] = std::move(xe);
          s.f[d] = fe;
        } else {
          s.x[d] = std::move(xr);
          s.f[d] = fr;
        }
      } else if (fr < s.f[d - 1]) {
        s.x[d] = std::move(xr);
        s.f[d] = fr;
      } else {
        const bool outside = fr < s.f[d];
        Eigen::VectorXd xc =
            outside ? (centroid + beta * (xr - centroid)).eval()
                    : (centroid + beta * (s.x[d] - centroid)).eval();
        const double fc = eval(xc);
        if (fc < std::min(fr, s.f[d])) {
          s.x[d] = std::move(xc);
          s.f[d] = fc;
        } else {
          for (int i = 1; i <= d && evals < max_evals; ++i) {
            s.x[i] = s.x[0] + delta * (s.x[i] - s.x[0]);
            s.f[i] = eval(s.x[i]);
          }
        }
      }
      s.sort();
    }

    best.converged = true;
    seed = best.x;  // restart around the incumbent with a fresh simplex
  }

  best.evaluations = evals;
  return best;
}

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, int evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 2; k < evaluations; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace qqbo
