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
// Relative-entropy pruning of backoff models.
//
// Removing (h, w) makes w back off from h, which changes bow(h) and with it
// every backed-off word of h. The cost of the removal is
//
//   D = -P(h) * [ p(w|h) (ln p(w|h') + ln bow'(h) - ln p(w|h))
//               + num(h) (ln bow'(h) - ln bow(h)) ]
//
// with num(h) the backed-off mass of h, den(h) the same words' mass under
// h', and bow'(h) = (num + p(w|h)) / (den + p(w|h')). P(h) is the model's
// own chained probability of h, leading start markers counting as certain.
// All candidates are scored against the unpruned model.

#ifndef LMMIX_PRUNE_H_
#define LMMIX_PRUNE_H_

#include <cstddef>
#include <vector>

#include "lmmix/backoff_lm.h"

namespace lmmix {

// D for every entry, indexed [level][node]. NaN where the entry is not a
// candidate: unigrams and entries predicting the start marker.
std::vector<std::vector<double>> PruneScores(const BackoffLm &lm,
                                             Parallelism par = Parallelism::kOpenMp);

struct PruneStats {
  std::vector<std::size_t> before, after;  // entries per order
  std::size_t pruned_direct = 0;
  // Entries removed because their history was removed.
  std::size_t pruned_cascade = 0;
  BackoffStats backoff;
};

// Removes every candidate with D < threshold (|D| < 1e-15 counts as 0)
// along with its extensions, then recomputes backoff weights.
BackoffLm EntropyPrune(const BackoffLm &lm, double threshold,
                       PruneStats *stats = nullptr,
                       Parallelism par = Parallelism::kOpenMp);

}  // namespace lmmix

#endif  // LMMIX_PRUNE_H_
