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
// Static approximation of an interpolated model: a single backoff model
// over the union of the components' n-grams, each entry holding the
// interpolated probability for its own context, with backoff weights
// recomputed afterwards.

#ifndef LMMIX_STATIC_MERGE_H_
#define LMMIX_STATIC_MERGE_H_

#include <string>
#include <vector>

#include "lmmix/backoff_lm.h"
#include "lmmix/evaluate.h"
#include "lmmix/events.h"
#include "lmmix/interp.h"

namespace lmmix {

// Canonical trie holding every n-gram stored by any component.
NgramTrie UnionNgrams(const ComponentSet &comps);

struct MergedLm {
  BackoffLm lm;
  Strategy strategy;
  WeightVector lambda = WeightVector::Uniform(1);
  std::vector<std::string> components;
  BackoffStats stats;
};

MergedLm MergeStatic(const Strategy &strategy, const WeightVector &lambda,
                     const ComponentSet &comps,
                     Parallelism par = Parallelism::kOpenMp);

struct GapReport {
  EvalReport dynamic;
  EvalReport merged;
  // Events whose full-order n-gram is absent from the union.
  std::size_t uncovered_events = 0;
};

GapReport DynamicStaticGap(const Strategy &strategy, const WeightVector &lambda,
                           const ComponentSet &comps, const EventList &events,
                           Parallelism par = Parallelism::kOpenMp);
GapReport DynamicStaticGap(const MergedLm &merged, const ComponentSet &comps,
                           const EventList &events,
                           Parallelism par = Parallelism::kOpenMp);

}  // namespace lmmix

#endif  // LMMIX_STATIC_MERGE_H_
