// Copyright 2026 The lmmix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "lmmix/lbfgs.h"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lmmix {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double MaxNorm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct Trial {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative at alpha
};

// Minimizer of the cubic through two trials, clamped to the inner 80% of
// the bracket; bisection when the cubic is unusable.
double Interpolate(const Trial &lo, const Trial &hi) {
  const double a = lo.alpha, b = hi.alpha;
  const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
  const double disc = d1 * d1 - lo.slope * hi.slope;
  double x = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = hi.slope - lo.slope + 2.0 * d2;
    if (denom != 0.0) {
      const double c = b - (b - a) * (hi.slope + d2 - d1) / denom;
      if (std::isfinite(c)) x = c;
    }
  }
  const double left = std::min(a, b), right = std::max(a, b);
  const double margin = 0.1 * (right - left);
  return std::clamp(x, left + margin, right - margin);
}

}  // namespace

LbfgsResult MinimizeLbfgs(const Objective &objective, std::vector<double> x0,
                          const LbfgsOptions &options,
                          const std::function<void(int, double, double)> &trace) {
  const std::size_t n = x0.size();
  LbfgsResult result;
  result.x = std::move(x0);
  std::vector<double> g(n), dir(n), x_new(n), g_new(n);
  result.f = objective(result.x, g);
  result.gradient_norm = MaxNorm(g);
  if (n == 0 || result.gradient_norm < options.gradient_tol) {
    result.converged = true;
    return result;
  }

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  std::vector<double> alpha_buf;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    // Two-loop recursion: dir = -H g.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
    alpha_buf.assign(history.size(), 0.0);
    for (std::size_t j = history.size(); j-- > 0;) {
      alpha_buf[j] = history[j].rho * Dot(history[j].s, dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[j] * history[j].y[i];
    }
    if (!history.empty()) {
      const auto &last = history.back();
      const double gamma = Dot(last.s, last.y) / Dot(last.y, last.y);
      for (double &d : dir) d *= gamma;
    }
    for (std::size_t j = 0; j < history.size(); ++j) {
      const double beta = history[j].rho * Dot(history[j].y, dir);
      for (std::size_t i = 0; i < n; ++i)
        dir[i] += (alpha_buf[j] - beta) * history[j].s[i];
    }
    double slope0 = Dot(g, dir);
    if (!(slope0 < 0.0)) {
      // Not a descent direction: fall back to steepest descent.
      history.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope0 = Dot(g, dir);
    }

    const Trial start{0.0, result.f, slope0};
    double last_alpha = -1.0;
    auto eval = [&](double alpha) {
      last_alpha = alpha;
      for (std::size_t i = 0; i < n; ++i) x_new[i] = result.x[i] + alpha * dir[i];
      Trial t{alpha, objective(x_new, g_new), 0.0};
      t.slope = Dot(g_new, dir);
      return t;
    };
    auto sufficient = [&](const Trial &t) {
      return std::isfinite(t.f) && t.f <= start.f + kArmijo * t.alpha * slope0;
    };
    auto curvature_ok = [&](const Trial &t) {
      return std::abs(t.slope) <= -kCurvature * slope0;
    };

    double alpha = history.empty() ? std::min(1.0, 1.0 / MaxNorm(dir)) : 1.0;
    Trial prev = start, accepted;
    bool found = false;
    for (int ls = 0; ls < options.max_line_search && !found; ++ls) {
      Trial t = eval(alpha);
      Trial lo, hi;
      bool zoom = false;
      if (!sufficient(t) || (ls > 0 && t.f >= prev.f)) {
        lo = prev;
        hi = t;
        zoom = true;
      } else if (curvature_ok(t)) {
        accepted = t;
        found = true;
        break;
      } else if (t.slope >= 0.0) {
        lo = t;
        hi = prev;
        zoom = true;
      }
      if (zoom) {
        for (int z = 0; z < options.max_line_search; ++z) {
          Trial m = eval(Interpolate(lo, hi));
          if (!sufficient(m) || m.f >= lo.f) {
            hi = m;
          } else {
            if (curvature_ok(m)) {
              accepted = m;
              found = true;
              break;
            }
            if (m.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
            lo = m;
          }
          if (std::abs(hi.alpha - lo.alpha) < 1e-16) break;
        }
        if (!found && lo.alpha > 0.0 && lo.f < start.f) {
          // Accept the best Armijo point from the bracket.
          accepted = eval(lo.alpha);
          found = true;
        }
        break;
      }
      prev = t;
      alpha *= 2.0;
    }
    if (!found && prev.alpha > 0.0) {
      accepted = prev;
      found = true;
    }
    if (!found) break;  // no progress possible along dir

    // x_new/g_new hold the last evaluated point.
    if (last_alpha != accepted.alpha) accepted = eval(accepted.alpha);

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - result.x[i];
      p.y[i] = g_new[i] - g[i];
    }
    const double sy = Dot(p.s, p.y);
    const double f_prev = result.f;
    result.x = x_new;
    g = g_new;
    result.f = accepted.f;
    result.gradient_norm = MaxNorm(g);
    result.iterations = iter;
    if (sy > 1e-16 * std::sqrt(Dot(p.s, p.s) * Dot(p.y, p.y)) && sy > 0.0) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    if (trace) trace(iter, result.f, result.gradient_norm);
    if (result.gradient_norm < options.gradient_tol ||
        std::abs(f_prev - result.f) <=
            options.relative_tol * std::max(1.0, std::abs(result.f))) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace lmmix
