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
// ARPA-style backoff n-gram model.
//
// Each stored k-gram carries a log10 probability and, when it is the
// history of some stored (k+1)-gram, a log10 backoff weight. Queries follow
// the usual recursion
//
//   p(w | h) = p*(w | h)                   if (h, w) is stored
//            = bow(h) * p(w | h minus oldest)  otherwise
//
// with bow(h) = 1 when h is not stored. Entries predicting the start
// marker are structural: they exist so that their extensions are
// reachable and hold the floor probability.

#ifndef LMMIX_BACKOFF_LM_H_
#define LMMIX_BACKOFF_LM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmmix/ngram_trie.h"
#include "lmmix/types.h"
#include "lmmix/vocab.h"

namespace lmmix {

struct BackoffStats {
  // Histories whose explicit mass reached 1 while words were left over.
  std::size_t saturated_histories = 0;
  // Histories whose lower-order mass was exhausted before theirs was.
  std::size_t exhausted_denominators = 0;
};

class BackoffLm {
 public:
  BackoffLm(VocabPtr vocab, int order);

  int order() const { return trie_.order(); }
  const Vocabulary &vocab() const { return *vocab_; }
  const VocabPtr &vocab_ptr() const { return vocab_; }

  // log10 p(w | history); the history is truncated to its last order-1
  // tokens. Unknown unigrams get kLogProbFloor.
  double LogProb(WordId w, std::span<const WordId> history) const;
  double Prob(WordId w, std::span<const WordId> history) const;

  // log10 of the chained probability of h: sum over t of
  // LogProb(h_t, h_1..h_{t-1}). No implicit padding. Throws ArgumentError
  // when |h| > order-1.
  double SequenceLogProb(std::span<const WordId> h) const;

  const NgramTrie &trie() const { return trie_; }
  std::size_t num_ngrams(int k) const { return trie_.size(k - 1); }
  std::size_t total_ngrams() const { return trie_.total_size(); }
  NodeIndex Find(std::span<const WordId> ngram) const { return trie_.Find(ngram); }

  double log_prob(int level, NodeIndex n) const { return log_probs_[level][n]; }
  // 0 when the entry has no backoff weight.
  double backoff(int level, NodeIndex n) const { return backoffs_[level][n]; }
  bool has_backoff(int level, NodeIndex n) const {
    return has_backoff_[level][n] != 0;
  }

  // Free-form metadata, serialized as "##" lines ahead of the ARPA body.
  std::vector<std::string> &comments() { return comments_; }
  const std::vector<std::string> &comments() const { return comments_; }

  // --- construction ---
  // The (k-1)-prefix must already be stored. Throws ArgumentError
  // otherwise or on duplicates.
  NodeIndex Add(std::span<const WordId> ngram, double log_prob,
                std::optional<double> backoff = std::nullopt);
  void set_log_prob(int level, NodeIndex n, double v) { log_probs_[level][n] = v; }
  void set_backoff(int level, NodeIndex n, std::optional<double> v);

  // Sorts entries lexicographically. Call once all entries are added.
  void Finalize();

  // Recomputes every backoff weight from order 1 upward so that each
  // stored history's explicit mass plus backoff mass sums to one:
  //   bow(h) = (1 - sum_E p(w|h)) / (1 - sum_E p(w|h'))
  // over the explicit words E of h, with h' = h minus its oldest token.
  // Entries with children get a weight; others get none.
  BackoffStats RecomputeBackoffs(Parallelism par = Parallelism::kOpenMp);

 private:
  VocabPtr vocab_;
  NgramTrie trie_;
  std::vector<std::vector<double>> log_probs_;
  std::vector<std::vector<double>> backoffs_;
  std::vector<std::vector<std::uint8_t>> has_backoff_;
  std::vector<std::string> comments_;
};

// Sum over all words except the start marker of p(w | h), in linear space.
double DistributionMass(const BackoffLm &lm, std::span<const WordId> history);

}  // namespace lmmix

#endif  // LMMIX_BACKOFF_LM_H_
