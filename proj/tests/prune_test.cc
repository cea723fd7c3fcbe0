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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "lmmix/prune.h"
#include "support/oracles.h"
#include "support/synthetic.h"

using namespace lmmix;

namespace {

BackoffLm SmallBigram(std::mt19937_64 &rng) {
  auto words = testing::WordList(6);
  auto v = testing::MakeVocab(words);
  auto lines = testing::RandomSentences(rng, words, 12, 4);
  return *testing::Train(lines, v, 2).lm;
}

}  // namespace

TEST_CASE("scores match the leave-one-out oracle") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    BackoffLm lm = SmallBigram(rng);
    REQUIRE(lm.total_ngrams() <= 50);
    auto scores = PruneScores(lm, Parallelism::kSerial);
    auto oracle = testing::LeaveOneOutPruneCosts(lm);
    for (NodeIndex n = 0; n < lm.trie().size(1); ++n) {
      auto ng = lm.trie().Ngram(1, n);
      if (ng[1] == kBos) {
        CHECK(std::isnan(scores[1][n]));
        continue;
      }
      CHECK(scores[1][n] == doctest::Approx(oracle.at(ng)).epsilon(1e-7));
    }
    for (double s : scores[0]) CHECK(std::isnan(s));
  }
}

TEST_CASE("decisions match the oracle across thresholds") {
  std::mt19937_64 rng(83);
  BackoffLm lm = SmallBigram(rng);
  auto oracle = testing::LeaveOneOutPruneCosts(lm);
  std::vector<double> costs;
  for (auto &[ng, c] : oracle) costs.push_back(c);
  std::sort(costs.begin(), costs.end());
  std::size_t prev_size = lm.total_ngrams() + 1;
  for (std::size_t i = 0; i + 1 < costs.size(); i += std::max<std::size_t>(1, costs.size() / 10)) {
    const double threshold = 0.5 * (costs[i] + costs[i + 1]);
    PruneStats st;
    BackoffLm pruned = EntropyPrune(lm, threshold, &st, Parallelism::kSerial);
    for (auto &[ng, c] : oracle) CHECK((pruned.Find(ng) == kNoNode) == (c < threshold));
    CHECK(pruned.total_ngrams() <= prev_size);
    prev_size = pruned.total_ngrams();
    CHECK(testing::MaxNormalizationError(pruned) < 1e-6);
  }
}

TEST_CASE("threshold limits") {
  std::mt19937_64 rng(85);
  auto words = testing::WordList(20);
  auto v = testing::MakeVocab(words);
  auto lines = testing::RandomSentences(rng, words, 80, 8);
  BackoffLm lm = *testing::Train(lines, v, 4).lm;

  PruneStats st;
  BackoffLm same = EntropyPrune(lm, 0.0, &st);
  CHECK(same.total_ngrams() == lm.total_ngrams());
  CHECK(st.pruned_direct == 0);
  CHECK(st.before == st.after);

  BackoffLm uni = EntropyPrune(lm, std::numeric_limits<double>::infinity(), &st);
  CHECK(uni.num_ngrams(1) == lm.num_ngrams(1));
  for (int k = 2; k <= 4; ++k) CHECK(uni.num_ngrams(k) == 0);
  CHECK(st.pruned_cascade > 0);
  CHECK(testing::MaxNormalizationError(uni) < 1e-6);

  CHECK_THROWS_AS(EntropyPrune(lm, -1.0), ArgumentError);
}

TEST_CASE("pruned models stay normalized, closed and monotone") {
  std::mt19937_64 rng(87);
  auto words = testing::WordList(30);
  auto v = testing::MakeVocab(words);
  testing::MarkovSource src(words, 5, 0.4, 0.12, rng);
  auto lines = src.Corpus(rng, 4000);
  BackoffLm lm = *testing::Train(lines, v, 3).lm;
  std::vector<double> thresholds{1e-9, 1e-8, 1e-7, 3e-7, 1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 1e-3};
  std::size_t prev = lm.total_ngrams();
  for (double t : thresholds) {
    PruneStats st;
    BackoffLm p = EntropyPrune(lm, t, &st);
    CHECK(p.total_ngrams() <= prev);
    prev = p.total_ngrams();
    CHECK(testing::MaxNormalizationError(p) < 1e-6);
    for (int k = 1; k < 3; ++k)
      for (NodeIndex n = 0; n < p.trie().size(k); ++n) {
        auto ng = p.trie().Ngram(k, n);
        ng.pop_back();
        CHECK(p.Find(ng) != kNoNode);
      }
    std::size_t removed = 0;
    for (int k = 0; k < 3; ++k) removed += st.before[k] - st.after[k];
    CHECK(removed >= st.pruned_direct);
  }
}
