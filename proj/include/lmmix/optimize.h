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
// Fitting component priors on a validation set.
//
// The objective is the dynamic model's validation NLL (nats per event).
// For a fixed strategy the component probabilities p_i(w|h) and history
// statistics s_i(h) of every event do not depend on lambda, so they are
// computed once (MixtureEvents); each objective evaluation is then a pass
// over a dense events-by-components table.
//
// lambda is parameterized as softmax(theta) with theta_0 pinned at 0.

#ifndef LMMIX_OPTIMIZE_H_
#define LMMIX_OPTIMIZE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lmmix/events.h"
#include "lmmix/interp.h"

namespace lmmix {

class MixtureEvents {
 public:
  static MixtureEvents Build(const Strategy &strategy, const ComponentSet &comps,
                             const EventList &events,
                             Parallelism par = Parallelism::kOpenMp);

  Method method() const { return method_; }
  std::size_t num_events() const { return events_; }
  std::size_t num_components() const { return k_; }
  std::span<const double> probs(std::size_t e) const {
    return {probs_.data() + e * k_, k_};
  }
  // Count merging: c_i(h)/N_i, or all ones when every count is zero.
  // Bayesian: p_i(h) / max_j p_j(h). Linear: ones.
  std::span<const double> stats(std::size_t e) const {
    return {stats_.data() + e * k_, k_};
  }
  // Bayesian only: ln p_i(h).
  std::span<const double> log_stats(std::size_t e) const {
    return {log_stats_.data() + e * k_, k_};
  }

 private:
  Method method_ = Method::kLinear;
  std::size_t events_ = 0, k_ = 0;
  std::vector<double> probs_, stats_, log_stats_;
};

struct NllGradient {
  double nll = 0.0;
  // d nll / d theta_j for every component (including the pinned one).
  std::vector<double> grad;
};

// Throws DataError on an empty table.
NllGradient MixtureNllAndGradient(const MixtureEvents &table,
                                  const WeightVector &lambda,
                                  Parallelism par = Parallelism::kOpenMp);

NllGradient NllAndGradient(const Strategy &strategy, const WeightVector &lambda,
                           const ComponentSet &comps, const EventList &validation,
                           Parallelism par = Parallelism::kOpenMp);

WeightVector Softmax(std::span<const double> logits);

struct FitOptions {
  int restarts = 4;
  double tol = 1e-7;
  int max_iterations = 500;
  std::uint64_t seed = 1;
  // Uniform when unset.
  std::optional<WeightVector> init;
  Parallelism par = Parallelism::kOpenMp;
  // (restart, iteration, nll, gradient max-norm)
  std::function<void(int, int, double, double)> trace;
};

struct FitResult {
  WeightVector lambda = WeightVector::Uniform(1);
  double validation_nll = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

// Runs from `init` plus restarts-1 seeded random points of the simplex and
// keeps the best.
FitResult FitWeights(const MixtureEvents &table, const FitOptions &options = {});
FitResult FitWeights(const Strategy &strategy, const ComponentSet &comps,
                     const EventList &validation, const FitOptions &options = {});

}  // namespace lmmix

#endif  // LMMIX_OPTIMIZE_H_
