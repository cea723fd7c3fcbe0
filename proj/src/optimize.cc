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

#include "lmmix/optimize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lmmix/lbfgs.h"

namespace lmmix {
namespace {

// Events per block of the parallel reduction. Fixed, so the result does
// not depend on the thread count.
constexpr std::size_t kBlock = 2048;

// Adds event e's -ln f and -d ln f / d theta into nll and grad.
void AccumulateEvent(const MixtureEvents &t, std::size_t e,
                     std::span<const double> lambda, double &nll,
                     std::span<double> grad) {
  const std::size_t k = lambda.size();
  auto p = t.probs(e);
  auto s = t.stats(e);
  double stat_buf[64];
  std::vector<double> heap;
  double *sv = stat_buf;
  if (k > 64) {
    heap.resize(k);
    sv = heap.data();
  }
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sv[i] = s[i];
    a += lambda[i] * s[i] * p[i];
    b += lambda[i] * s[i];
  }
  if (b <= 0.0) {
    // The only supported components have zero weight.
    if (t.method() == Method::kBayes) {
      auto ls = t.log_stats(e);
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i)
        if (lambda[i] > 0.0) best = std::max(best, ls[i]);
      for (std::size_t i = 0; i < k; ++i)
        sv[i] = lambda[i] > 0.0 ? std::exp(ls[i] - best) : 0.0;
    } else {
      for (std::size_t i = 0; i < k; ++i) sv[i] = 1.0;
    }
    a = b = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      a += lambda[i] * sv[i] * p[i];
      b += lambda[i] * sv[i];
    }
  }
  if (a <= 0.0) a = kProbFloor * b;
  nll -= std::log(a) - std::log(b);
  for (std::size_t j = 0; j < k; ++j)
    grad[j] -= lambda[j] * (sv[j] * p[j] / a - sv[j] / b);
}

std::vector<double> RandomSimplexPoint(std::mt19937_64 &rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(k);
  for (double &x : v) x = -std::log(1.0 - u(rng));
  return v;
}

std::vector<double> LogitsFromLambda(const WeightVector &lambda) {
  const std::size_t k = lambda.size();
  std::vector<double> x(k - 1);
  const double base = std::log(std::max(lambda[0], 1e-300));
  for (std::size_t j = 1; j < k; ++j)
    x[j - 1] = std::log(std::max(lambda[j], 1e-300)) - base;
  return x;
}

WeightVector LambdaFromFree(std::span<const double> free) {
  std::vector<double> logits(free.size() + 1, 0.0);
  std::copy(free.begin(), free.end(), logits.begin() + 1);
  return Softmax(logits);
}

}  // namespace

WeightVector Softmax(std::span<const double> logits) {
  double best = *std::max_element(logits.begin(), logits.end());
  std::vector<double> v(logits.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(logits[i] - best);
  return WeightVector::Normalize(std::move(v));
}

MixtureEvents MixtureEvents::Build(const Strategy &strategy,
                                   const ComponentSet &comps,
                                   const EventList &events, Parallelism par) {
  if (events.order() != comps.order())
    throw ArgumentError("events were built for a different model order");
  MixtureEvents t;
  t.method_ = strategy.method;
  t.events_ = events.size();
  t.k_ = comps.size();
  const std::size_t k = t.k_;
  t.probs_.resize(t.events_ * k);
  t.stats_.assign(t.events_ * k, 1.0);
  if (t.method_ == Method::kBayes) t.log_stats_.resize(t.events_ * k);
  std::vector<double> n(k, 0.0);
  if (t.method_ == Method::kCountMerge) {
    for (std::size_t i = 0; i < k; ++i) {
      n[i] = static_cast<double>(comps.total_words(i));
      if (n[i] <= 0.0) throw ArgumentError("count merging needs nonempty count tables");
    }
  }

  auto fill = [&](std::size_t e) {
    auto h = events.history(e);
    const WordId w = events.word(e);
    double *p = t.probs_.data() + e * k;
    double *s = t.stats_.data() + e * k;
    for (std::size_t i = 0; i < k; ++i) p[i] = comps[i].lm->Prob(w, h);
    if (t.method_ == Method::kCountMerge) {
      bool any = false;
      for (std::size_t i = 0; i < k; ++i) {
        s[i] = static_cast<double>(comps[i].counts->HistoryCount(h)) / n[i];
        any |= s[i] > 0.0;
      }
      if (!any) std::fill(s, s + k, 1.0);
    } else if (t.method_ == Method::kBayes) {
      double *ls = t.log_stats_.data() + e * k;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i) {
        ls[i] = std::numbers::ln10 * comps[i].lm->SequenceLogProb(h);
        best = std::max(best, ls[i]);
      }
      for (std::size_t i = 0; i < k; ++i) s[i] = std::exp(ls[i] - best);
    }
  };
  const std::size_t m = t.events_;
  if (par == Parallelism::kOpenMp) {
#pragma omp parallel for schedule(dynamic, 256)
    for (std::size_t e = 0; e < m; ++e) fill(e);
  } else {
    for (std::size_t e = 0; e < m; ++e) fill(e);
  }
  return t;
}

NllGradient MixtureNllAndGradient(const MixtureEvents &table,
                                  const WeightVector &lambda, Parallelism par) {
  const std::size_t m = table.num_events(), k = table.num_components();
  if (m == 0) throw DataError("empty validation set");
  if (lambda.size() != k) throw ArgumentError("weight vector size mismatch");
  NllGradient out;
  out.grad.assign(k, 0.0);
  const auto lam = lambda.values();

  if (par == Parallelism::kSerial) {
    for (std::size_t e = 0; e < m; ++e) AccumulateEvent(table, e, lam, out.nll, out.grad);
  } else {
    const std::size_t blocks = (m + kBlock - 1) / kBlock;
    std::vector<double> nll(blocks, 0.0), grad(blocks * k, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t end = std::min(m, (b + 1) * kBlock);
      std::span<double> g(grad.data() + b * k, k);
      for (std::size_t e = b * kBlock; e < end; ++e)
        AccumulateEvent(table, e, lam, nll[b], g);
    }
    for (std::size_t b = 0; b < blocks; ++b) {
      out.nll += nll[b];
      for (std::size_t j = 0; j < k; ++j) out.grad[j] += grad[b * k + j];
    }
  }
  const double inv = 1.0 / static_cast<double>(m);
  out.nll *= inv;
  for (double &g : out.grad) g *= inv;
  return out;
}

NllGradient NllAndGradient(const Strategy &strategy, const WeightVector &lambda,
                           const ComponentSet &comps, const EventList &validation,
                           Parallelism par) {
  if (validation.empty()) throw DataError("empty validation set");
  auto table = MixtureEvents::Build(strategy, comps, validation, par);
  return MixtureNllAndGradient(table, lambda, par);
}

FitResult FitWeights(const MixtureEvents &table, const FitOptions &options) {
  if (options.restarts < 1) throw ArgumentError("restarts must be >= 1");
  if (!(options.tol > 0.0)) throw ArgumentError("tol must be positive");
  const std::size_t k = table.num_components();
  if (table.num_events() == 0) throw DataError("empty validation set");

  FitResult best;
  if (k == 1) {
    best.lambda = WeightVector::Uniform(1);
    best.validation_nll =
        MixtureNllAndGradient(table, best.lambda, options.par).nll;
    best.converged = true;
    best.restarts_used = 1;
    return best;
  }
  if (options.init && options.init->size() != k)
    throw ArgumentError("initial weights have the wrong size");

  Objective objective = [&](std::span<const double> free, std::span<double> grad) {
    auto r = MixtureNllAndGradient(table, LambdaFromFree(free), options.par);
    for (std::size_t j = 1; j < k; ++j) grad[j - 1] = r.grad[j];
    return r.nll;
  };
  LbfgsOptions lopts;
  lopts.max_iterations = options.max_iterations;
  lopts.gradient_tol = options.tol;
  lopts.relative_tol = options.tol;

  std::mt19937_64 rng(options.seed);
  best.validation_nll = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    WeightVector start = r == 0 ? options.init.value_or(WeightVector::Uniform(k))
                                : WeightVector::Normalize(RandomSimplexPoint(rng, k));
    std::function<void(int, double, double)> trace;
    if (options.trace)
      trace = [&](int it, double f, double gn) { options.trace(r, it, f, gn); };
    auto res = MinimizeLbfgs(objective, LogitsFromLambda(start), lopts, trace);
    if (res.f < best.validation_nll) {
      best.lambda = LambdaFromFree(res.x);
      best.validation_nll = res.f;
      best.iterations = res.iterations;
      best.converged = res.converged;
    }
    best.restarts_used = r + 1;
  }
  return best;
}

FitResult FitWeights(const Strategy &strategy, const ComponentSet &comps,
                     const EventList &validation, const FitOptions &options) {
  if (validation.empty()) throw DataError("empty validation set");
  auto table = MixtureEvents::Build(strategy, comps, validation, options.par);
  return FitWeights(table, options);
}

}  // namespace lmmix
