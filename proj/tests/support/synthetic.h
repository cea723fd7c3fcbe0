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
// Synthetic corpora and small model builders shared by tests and the
// benchmark.

#ifndef LMMIX_TESTS_SUPPORT_SYNTHETIC_H_
#define LMMIX_TESTS_SUPPORT_SYNTHETIC_H_

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lmmix/backoff_lm.h"
#include "lmmix/counts.h"
#include "lmmix/interp.h"
#include "lmmix/vocab.h"

namespace lmmix::testing {

// "<prefix>0" .. "<prefix>{n-1}".
std::vector<std::string> WordList(std::size_t n, const std::string &prefix = "w");
VocabPtr MakeVocab(std::span<const std::string> words);

std::vector<double> SampleDirichlet(std::mt19937_64 &rng, std::span<const double> alpha);

// First-order Markov source. Every word (and the sentence start) has
// `support` successors drawn from `words` with Dirichlet(concentration)
// probabilities.
class MarkovSource {
 public:
  MarkovSource(std::vector<std::string> words, std::size_t support,
               double concentration, double stop_prob, std::mt19937_64 &rng);

  std::string Sentence(std::mt19937_64 &rng) const;
  // Sentences until at least `min_words` tokens were produced.
  std::vector<std::string> Corpus(std::mt19937_64 &rng, std::size_t min_words) const;

 private:
  struct Row {
    std::vector<std::size_t> next;
    std::discrete_distribution<std::size_t> dist;
  };
  std::vector<std::string> words_;
  std::vector<Row> rows_;  // rows_[words_.size()] is the start state
  double stop_prob_;
};

// Sentences of uniformly random words with lengths in [1, max_len].
std::vector<std::string> RandomSentences(std::mt19937_64 &rng,
                                         std::span<const std::string> words,
                                         std::size_t sentences, std::size_t max_len);

struct Trained {
  std::shared_ptr<const NgramCounts> counts;
  std::shared_ptr<const BackoffLm> lm;
};

// Counts `lines` and estimates a Katz model (all-ones thresholds if empty).
Trained Train(std::span<const std::string> lines, VocabPtr vocab, int order,
              std::vector<std::int64_t> thresholds = {});
Component MakeComponent(const std::string &name, std::span<const std::string> lines,
                        VocabPtr vocab, int order);

// Random component set: `k` components over a vocabulary of `v` words,
// each trained on its own random text with a skewed word distribution.
ComponentSet RandomComponents(std::mt19937_64 &rng, std::size_t k, std::size_t v,
                              int order, std::size_t sentences = 40);

WeightVector RandomWeights(std::mt19937_64 &rng, std::size_t k);

}  // namespace lmmix::testing

#endif  // LMMIX_TESTS_SUPPORT_SYNTHETIC_H_
