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

#include "lmmix/prune.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace lmmix {
namespace {

constexpr double kNoise = 1e-15;
constexpr double kSmallDenominator = 1e-4;

template <typename F>
void ParallelFor(Parallelism par, std::size_t n, F &&f) {
  if (par == Parallelism::kOpenMp) {
#pragma omp parallel for schedule(dynamic, 256)
    for (std::size_t i = 0; i < n; ++i) f(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

// ln P(h), skipping leading start markers.
double HistoryLogMarginal(const BackoffLm &lm, std::span<const WordId> h) {
  std::size_t t = 0;
  while (t < h.size() && h[t] == kBos) ++t;
  double total = 0.0;
  for (; t < h.size(); ++t) total += lm.LogProb(h[t], h.first(t));
  return std::numbers::ln10 * total;
}

}  // namespace

std::vector<std::vector<double>> PruneScores(const BackoffLm &lm, Parallelism par) {
  const NgramTrie &trie = lm.trie();
  const int order = lm.order();
  const WordId vocab_size = static_cast<WordId>(lm.vocab().size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> scores(order);
  scores[0].assign(trie.size(0), nan);

  for (int k = 1; k < order; ++k) {
    const int hl = k - 1;
    const std::size_t n_hist = trie.size(hl), n = trie.size(k);
    scores[k].assign(n, nan);

    std::vector<double> lower(n, 0.0);
    ParallelFor(par, n, [&](std::size_t c) {
      WordId ids[kMaxOrder];
      std::span<WordId> ng(ids, k + 1);
      trie.Ngram(k, static_cast<NodeIndex>(c), ng);
      if (ng[k] != kBos) lower[c] = lm.Prob(ng[k], ng.subspan(1, k - 1));
    });

    std::vector<double> explicit_mass(n_hist, 0.0), lower_mass(n_hist, 0.0);
    std::vector<std::uint8_t> candidate(n_hist, 0);
    for (NodeIndex c = 0; c < n; ++c) {
      if (trie.word(k, c) == kBos) continue;
      NodeIndex p = trie.parent(k, c);
      candidate[p] = 1;
      explicit_mass[p] += std::pow(10.0, lm.log_prob(k, c));
      lower_mass[p] += lower[c];
    }

    std::vector<double> log_marginal(n_hist, 0.0), num(n_hist, 0.0), den(n_hist, 0.0);
    ParallelFor(par, n_hist, [&](std::size_t h) {
      if (!candidate[h]) return;
      auto hist = trie.Ngram(hl, static_cast<NodeIndex>(h));
      log_marginal[h] = HistoryLogMarginal(lm, hist);
      num[h] = std::max(0.0, 1.0 - explicit_mass[h]);
      double d = 1.0 - lower_mass[h];
      if (d < kSmallDenominator) {
        std::span<const WordId> shorter(hist.data() + 1, hist.size() - 1);
        d = 0.0;
        for (WordId v = 0; v < vocab_size; ++v) {
          if (v == kBos || trie.Child(k, static_cast<NodeIndex>(h), v) != kNoNode)
            continue;
          d += lm.Prob(v, shorter);
        }
      }
      den[h] = std::max(0.0, d);
    });

    ParallelFor(par, n, [&](std::size_t c) {
      const NodeIndex node = static_cast<NodeIndex>(c);
      if (trie.word(k, node) == kBos) return;
      const NodeIndex h = trie.parent(k, node);
      const double ln_p = std::numbers::ln10 * lm.log_prob(k, node);
      const double p = std::exp(ln_p);
      const double p_bo = lower[c];
      const double ln_bow = std::numbers::ln10 * lm.backoff(hl, h);
      const double ln_bow_new = std::log(num[h] + p) - std::log(den[h] + p_bo);
      double inner = p * (std::log(p_bo) + ln_bow_new - ln_p);
      if (num[h] > 0.0) inner += num[h] * (ln_bow_new - ln_bow);
      double d = -std::exp(log_marginal[h]) * inner;
      if (std::fabs(d) < kNoise) d = 0.0;
      scores[k][c] = d;
    });
  }
  return scores;
}

BackoffLm EntropyPrune(const BackoffLm &lm, double threshold, PruneStats *stats,
                       Parallelism par) {
  if (!(threshold >= 0.0)) throw ArgumentError("prune threshold must be >= 0");
  const NgramTrie &trie = lm.trie();
  const int order = lm.order();
  auto scores = PruneScores(lm, par);

  PruneStats local;
  std::vector<std::vector<std::uint8_t>> keep(order);
  keep[0].assign(trie.size(0), 1);
  for (int k = 1; k < order; ++k) {
    keep[k].assign(trie.size(k), 0);
    for (NodeIndex c = 0; c < trie.size(k); ++c) {
      if (!keep[k - 1][trie.parent(k, c)]) {
        ++local.pruned_cascade;
        continue;
      }
      const double d = scores[k][c];
      if (!std::isnan(d) && d < threshold) {
        ++local.pruned_direct;
        continue;
      }
      keep[k][c] = 1;
    }
  }
  // Start-marker entries only exist to reach their extensions; drop the
  // ones that lost all of them.
  for (int k = order - 2; k >= 1; --k) {
    std::vector<std::uint8_t> had(trie.size(k), 0), has(trie.size(k), 0);
    for (NodeIndex c = 0; c < trie.size(k + 1); ++c) {
      had[trie.parent(k + 1, c)] = 1;
      if (keep[k + 1][c]) has[trie.parent(k + 1, c)] = 1;
    }
    for (NodeIndex c = 0; c < trie.size(k); ++c)
      if (keep[k][c] && trie.word(k, c) == kBos && had[c] && !has[c]) keep[k][c] = 0;
  }

  BackoffLm out(lm.vocab_ptr(), order);
  out.comments() = lm.comments();
  std::vector<WordId> ng;
  for (int k = 0; k < order; ++k) {
    local.before.push_back(trie.size(k));
    std::size_t kept = 0;
    ng.resize(k + 1);
    for (NodeIndex c = 0; c < trie.size(k); ++c) {
      if (!keep[k][c]) continue;
      trie.Ngram(k, c, ng);
      out.Add(ng, lm.log_prob(k, c));
      ++kept;
    }
    local.after.push_back(kept);
  }
  out.Finalize();
  local.backoff = out.RecomputeBackoffs(par);
  char buf[64];
  std::snprintf(buf, sizeof buf, "pruning: entropy threshold=%g", threshold);
  out.comments().push_back(buf);
  if (stats) *stats = std::move(local);
  return out;
}

}  // namespace lmmix
