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

#include "lmmix/static_merge.h"

#include <cmath>
#include <cstdio>

namespace lmmix {

NgramTrie UnionNgrams(const ComponentSet &comps) {
  const int order = comps.order();
  NgramTrie out(order);
  std::vector<NodeIndex> map;
  for (int k = 0; k < order; ++k) {
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const NgramTrie &t = comps[i].lm->trie();
      for (NodeIndex n = 0; n < t.size(k); ++n) {
        // Parents were inserted at the previous level, so look them up by
        // path rather than carrying per-component maps.
        NodeIndex parent = kNoNode;
        if (k > 0) {
          auto ngram = t.Ngram(k - 1, t.parent(k, n));
          parent = out.Find(ngram);
        }
        out.InsertChild(k, parent, t.word(k, n));
      }
    }
  }
  out.Canonicalize();
  return out;
}

MergedLm MergeStatic(const Strategy &strategy, const WeightVector &lambda,
                     const ComponentSet &comps, Parallelism par) {
  if (lambda.size() != comps.size())
    throw ArgumentError("weight vector size mismatch");
  const int order = comps.order();
  const std::size_t k_comps = comps.size();
  NgramTrie u = UnionNgrams(comps);
  MergedLm merged{BackoffLm(comps.vocab_ptr(), order), strategy, lambda,
                  comps.names(), {}};
  BackoffLm &lm = merged.lm;

  std::vector<double> posterior;
  std::vector<double> values;
  for (int level = 0; level < order; ++level) {
    // One posterior per distinct context at this level.
    const std::size_t n_hist = level == 0 ? 1 : u.size(level - 1);
    posterior.assign(n_hist * k_comps, 0.0);
    auto fill_posterior = [&](std::size_t h) {
      WordId ids[kMaxOrder];
      std::span<WordId> hist(ids, level);
      if (level > 0) u.Ngram(level - 1, static_cast<NodeIndex>(h), hist);
      HistoryPosterior(strategy, lambda, comps, hist,
                       std::span<double>(posterior.data() + h * k_comps, k_comps));
    };
    const std::size_t n = u.size(level);
    values.assign(n, 0.0);
    auto fill_value = [&](std::size_t c) {
      WordId ids[kMaxOrder];
      std::span<WordId> ng(ids, level + 1);
      u.Ngram(level, static_cast<NodeIndex>(c), ng);
      if (ng[level] == kBos) {
        values[c] = kLogProbFloor;
        return;
      }
      const std::size_t h = level == 0 ? 0 : u.parent(level, static_cast<NodeIndex>(c));
      double p = MixProb(std::span<const double>(posterior.data() + h * k_comps, k_comps),
                         comps, ng[level], ng.first(level));
      values[c] = p > 0.0 ? std::log10(p) : kLogProbFloor;
    };
    if (par == Parallelism::kOpenMp) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::size_t h = 0; h < n_hist; ++h) fill_posterior(h);
#pragma omp parallel for schedule(dynamic, 256)
      for (std::size_t c = 0; c < n; ++c) fill_value(c);
    } else {
      for (std::size_t h = 0; h < n_hist; ++h) fill_posterior(h);
      for (std::size_t c = 0; c < n; ++c) fill_value(c);
    }
    std::vector<WordId> ng(level + 1);
    for (NodeIndex c = 0; c < n; ++c) {
      u.Ngram(level, c, ng);
      lm.Add(ng, values[c]);
    }
  }
  lm.Finalize();
  merged.stats = lm.RecomputeBackoffs(par);

  std::string line = "interpolation: ";
  line += MethodName(strategy.method);
  lm.comments().push_back(line);
  line = "weights:";
  char buf[64];
  for (std::size_t i = 0; i < k_comps; ++i) {
    std::snprintf(buf, sizeof buf, "%.12f", lambda[i]);
    line += ' ';
    line += merged.components[i];
    line += '=';
    line += buf;
  }
  lm.comments().push_back(line);
  return merged;
}

GapReport DynamicStaticGap(const MergedLm &merged, const ComponentSet &comps,
                           const EventList &events, Parallelism par) {
  GapReport r;
  r.dynamic = Perplexity(DynamicScorer(merged.strategy, merged.lambda, comps),
                         events, par);
  r.merged = Perplexity(LmScorer(merged.lm), events, par);
  for (std::size_t e = 0; e < events.size(); ++e)
    if (merged.lm.Find(events.ngram(e)) == kNoNode) ++r.uncovered_events;
  return r;
}

GapReport DynamicStaticGap(const Strategy &strategy, const WeightVector &lambda,
                           const ComponentSet &comps, const EventList &events,
                           Parallelism par) {
  return DynamicStaticGap(MergeStatic(strategy, lambda, comps, par), comps,
                          events, par);
}

}  // namespace lmmix
