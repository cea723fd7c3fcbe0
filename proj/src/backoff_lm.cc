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

#include "lmmix/backoff_lm.h"

#include <cmath>

namespace lmmix {
namespace {

// Below this the backoff denominator is re-derived by summing the
// complement directly instead of trusting 1 - sum.
constexpr double kSmallDenominator = 1e-4;

}  // namespace

BackoffLm::BackoffLm(VocabPtr vocab, int order)
    : vocab_(std::move(vocab)),
      trie_(order),
      log_probs_(order),
      backoffs_(order),
      has_backoff_(order) {
  if (!vocab_) throw ArgumentError("null vocabulary");
}

double BackoffLm::LogProb(WordId w, std::span<const WordId> history) const {
  const std::size_t max_ctx = static_cast<std::size_t>(order() - 1);
  if (history.size() > max_ctx) history = history.last(max_ctx);
  double acc = 0.0;
  for (std::size_t j = history.size(); j >= 1; --j) {
    NodeIndex ctx = trie_.Find(history.last(j));
    if (ctx == kNoNode) continue;
    NodeIndex child = trie_.Child(static_cast<int>(j), ctx, w);
    if (child != kNoNode) return acc + log_probs_[j][child];
    acc += backoffs_[j - 1][ctx];
  }
  NodeIndex uni = trie_.Child(0, kNoNode, w);
  return acc + (uni == kNoNode ? kLogProbFloor : log_probs_[0][uni]);
}

double BackoffLm::Prob(WordId w, std::span<const WordId> history) const {
  return std::pow(10.0, LogProb(w, history));
}

double BackoffLm::SequenceLogProb(std::span<const WordId> h) const {
  if (static_cast<int>(h.size()) > order() - 1)
    throw ArgumentError("history longer than order-1");
  double total = 0.0;
  for (std::size_t t = 0; t < h.size(); ++t) total += LogProb(h[t], h.first(t));
  return total;
}

NodeIndex BackoffLm::Add(std::span<const WordId> ngram, double log_prob,
                         std::optional<double> backoff) {
  const int k = static_cast<int>(ngram.size());
  if (k < 1 || k > order()) throw ArgumentError("n-gram length out of range");
  NodeIndex parent = kNoNode;
  if (k > 1) {
    parent = trie_.Find(ngram.first(k - 1));
    if (parent == kNoNode) throw ArgumentError("n-gram prefix is not stored");
  }
  auto [node, inserted] = trie_.InsertChild(k - 1, parent, ngram.back());
  if (!inserted) throw ArgumentError("duplicate n-gram");
  log_probs_[k - 1].push_back(log_prob);
  backoffs_[k - 1].push_back(backoff.value_or(0.0));
  has_backoff_[k - 1].push_back(backoff.has_value());
  return node;
}

void BackoffLm::set_backoff(int level, NodeIndex n, std::optional<double> v) {
  backoffs_[level][n] = v.value_or(0.0);
  has_backoff_[level][n] = v.has_value();
}

void BackoffLm::Finalize() {
  auto perms = trie_.Canonicalize();
  for (int k = 0; k < order(); ++k) {
    ApplyPermutation(log_probs_[k], perms[k]);
    ApplyPermutation(backoffs_[k], perms[k]);
    ApplyPermutation(has_backoff_[k], perms[k]);
  }
}

BackoffStats BackoffLm::RecomputeBackoffs(Parallelism par) {
  BackoffStats stats;
  const WordId vocab_size = static_cast<WordId>(vocab_->size());
  for (int k = 1; k < order(); ++k) {
    const int hist_level = k - 1;
    const std::size_t n_children = trie_.size(k);
    const std::size_t n_hist = trie_.size(hist_level);

    // Lower-order probability of each child's word; depends only on
    // weights of levels below hist_level, which are final.
    std::vector<double> lower(n_children, 0.0);
    auto lower_prob = [&](std::size_t c) {
      WordId ids[kMaxOrder];
      std::span<WordId> ng(ids, k + 1);
      trie_.Ngram(k, static_cast<NodeIndex>(c), ng);
      if (ng[k] == kBos) return 0.0;
      return std::pow(10.0, LogProb(ng[k], ng.subspan(1, k - 1)));
    };
    if (par == Parallelism::kOpenMp) {
#pragma omp parallel for schedule(static)
      for (std::size_t c = 0; c < n_children; ++c) lower[c] = lower_prob(c);
    } else {
      for (std::size_t c = 0; c < n_children; ++c) lower[c] = lower_prob(c);
    }

    std::vector<double> explicit_mass(n_hist, 0.0), lower_mass(n_hist, 0.0);
    std::vector<std::uint8_t> has_child(n_hist, 0), has_explicit(n_hist, 0);
    for (NodeIndex c = 0; c < n_children; ++c) {
      NodeIndex p = trie_.parent(k, c);
      has_child[p] = 1;
      if (trie_.word(k, c) == kBos) continue;
      has_explicit[p] = 1;
      explicit_mass[p] += std::pow(10.0, log_probs_[k][c]);
      lower_mass[p] += lower[c];
    }

    std::vector<WordId> hist;
    for (NodeIndex h = 0; h < n_hist; ++h) {
      if (!has_child[h]) {
        set_backoff(hist_level, h, std::nullopt);
        continue;
      }
      if (!has_explicit[h]) {
        set_backoff(hist_level, h, 0.0);
        continue;
      }
      const double num = 1.0 - explicit_mass[h];
      double den = 1.0 - lower_mass[h];
      if (den < kSmallDenominator) {
        // Sum the lower-order mass of the words h leaves to backoff.
        hist = trie_.Ngram(hist_level, h);
        std::span<const WordId> shorter(hist.data() + 1, hist.size() - 1);
        den = 0.0;
        for (WordId v = 0; v < vocab_size; ++v) {
          if (v == kBos || trie_.Child(k, h, v) != kNoNode) continue;
          den += std::pow(10.0, LogProb(v, shorter));
        }
      }
      double bow;
      if (num <= 0.0) {
        if (den > 0.0) ++stats.saturated_histories;
        bow = den > 0.0 ? std::log10(kProbFloor) : 0.0;
      } else if (den <= 0.0) {
        ++stats.exhausted_denominators;
        bow = 0.0;
      } else {
        bow = std::log10(num) - std::log10(den);
      }
      set_backoff(hist_level, h, bow);
    }
  }
  // Highest-order entries never carry weights.
  for (NodeIndex n = 0; n < trie_.size(order() - 1); ++n)
    set_backoff(order() - 1, n, std::nullopt);
  return stats;
}

double DistributionMass(const BackoffLm &lm, std::span<const WordId> history) {
  double total = 0.0;
  for (WordId v = 0; v < lm.vocab().size(); ++v) {
    if (v == kBos) continue;
    total += lm.Prob(v, history);
  }
  return total;
}

}  // namespace lmmix
