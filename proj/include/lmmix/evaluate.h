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
// Perplexity of component, dynamically interpolated and merged models.

#ifndef LMMIX_EVALUATE_H_
#define LMMIX_EVALUATE_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "lmmix/backoff_lm.h"
#include "lmmix/events.h"
#include "lmmix/interp.h"

namespace lmmix {

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual int order() const = 0;
  virtual const Vocabulary &vocab() const = 0;
  // Linear probability of w after history.
  virtual double Prob(WordId w, std::span<const WordId> history) const = 0;
};

class LmScorer : public Scorer {
 public:
  explicit LmScorer(const BackoffLm &lm) : lm_(lm) {}
  int order() const override { return lm_.order(); }
  const Vocabulary &vocab() const override { return lm_.vocab(); }
  double Prob(WordId w, std::span<const WordId> h) const override {
    return lm_.Prob(w, h);
  }

 private:
  const BackoffLm &lm_;
};

// Interpolation evaluated on the fly from the component models.
class DynamicScorer : public Scorer {
 public:
  DynamicScorer(Strategy strategy, WeightVector lambda, const ComponentSet &comps)
      : strategy_(strategy), lambda_(std::move(lambda)), comps_(comps) {}
  int order() const override { return comps_.order(); }
  const Vocabulary &vocab() const override { return comps_.vocab(); }
  double Prob(WordId w, std::span<const WordId> h) const override {
    return InterpProb(strategy_, lambda_, comps_, w, h);
  }

 private:
  Strategy strategy_;
  WeightVector lambda_;
  const ComponentSet &comps_;
};

struct EvalReport {
  double nll = 0.0;  // nats per event
  double ppl = 0.0;
  std::size_t events = 0;
  std::size_t oov_tokens = 0;
  std::size_t zero_prob_events = 0;
};

// Natural-log probability of every event. Zero probabilities are scored at
// the floor; `zero_events` (if given) receives how many there were.
std::vector<double> EventLogProbs(const Scorer &scorer, const EventList &events,
                                  Parallelism par = Parallelism::kOpenMp,
                                  std::size_t *zero_events = nullptr);

// Throws DataError on an empty event list and ArgumentError when the
// events were built for a different order.
EvalReport Perplexity(const Scorer &scorer, const EventList &events,
                      Parallelism par = Parallelism::kOpenMp);
EvalReport Perplexity(const Scorer &scorer, std::istream &text,
                      Parallelism par = Parallelism::kOpenMp);

// "metric<TAB>value" lines; ppl with one decimal.
void WriteReport(std::ostream &out, const EvalReport &report);

}  // namespace lmmix

#endif  // LMMIX_EVALUATE_H_
