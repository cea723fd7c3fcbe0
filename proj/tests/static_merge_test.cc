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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lmmix/arpa.h"
#include "lmmix/static_merge.h"
#include "support/oracles.h"
#include "support/synthetic.h"

using namespace lmmix;

namespace {

std::string Dump(const BackoffLm &lm) {
  std::ostringstream out;
  WriteArpa(lm, out);
  return out.str();
}

}  // namespace

TEST_CASE("union equals the naive set union") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    ComponentSet comps = testing::RandomComponents(rng, 1 + trial % 4, 15, 2 + trial % 3);
    NgramTrie u = UnionNgrams(comps);
    auto naive = testing::NaiveUnion(comps);
    for (int k = 0; k < comps.order(); ++k) {
      REQUIRE(u.size(k) == naive[k].size());
      for (NodeIndex n = 0; n < u.size(k); ++n) CHECK(naive[k].count(u.Ngram(k, n)) == 1);
    }
  }
}

TEST_CASE("disjoint components add up") {
  auto words = testing::WordList(6);
  auto v = testing::MakeVocab(words);
  std::vector<std::string> a{"w0 w1"}, b{"w2 w3"};
  ComponentSet comps({testing::MakeComponent("a", a, v, 2),
                      testing::MakeComponent("b", b, v, 2)});
  NgramTrie u = UnionNgrams(comps);
  // Unigrams cover the whole vocabulary in both; bigrams are disjoint
  // except (<s>, ...) histories which differ by word.
  CHECK(u.size(1) == comps[0].lm->num_ngrams(2) + comps[1].lm->num_ngrams(2));
}

TEST_CASE("single component merge is the identity") {
  std::mt19937_64 rng(73);
  ComponentSet one = testing::RandomComponents(rng, 1, 25, 3);
  MergedLm m = MergeStatic({Method::kCountMerge}, WeightVector::Uniform(1), one);
  const BackoffLm &src = *one[0].lm;
  for (int k = 0; k < 3; ++k) {
    REQUIRE(m.lm.num_ngrams(k + 1) == src.num_ngrams(k + 1));
    for (NodeIndex n = 0; n < src.trie().size(k); ++n) {
      CHECK(std::fabs(m.lm.log_prob(k, n) - src.log_prob(k, n)) < 1e-6);
      CHECK(std::fabs(m.lm.backoff(k, n) - src.backoff(k, n)) < 1e-6);
    }
  }
}

TEST_CASE("linear merge of tiny components by hand") {
  std::vector<std::string> w{"a", "b"};
  auto v = testing::MakeVocab(w);
  std::vector<std::string> c1{"a b", "a a b"}, c2{"b a", "b"};
  ComponentSet comps({testing::MakeComponent("x", c1, v, 2),
                      testing::MakeComponent("y", c2, v, 2)});
  MergedLm m = MergeStatic({Method::kLinear}, WeightVector::Uniform(2), comps);
  for (int k = 0; k < 2; ++k) {
    for (NodeIndex n = 0; n < m.lm.trie().size(k); ++n) {
      auto ng = m.lm.trie().Ngram(k, n);
      if (ng.back() == kBos) continue;
      std::span<const WordId> h(ng.data(), ng.size() - 1);
      const double expect =
          0.5 * comps[0].lm->Prob(ng.back(), h) + 0.5 * comps[1].lm->Prob(ng.back(), h);
      CHECK(std::pow(10.0, m.lm.log_prob(k, n)) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  CHECK(testing::MaxNormalizationError(m.lm) < 1e-6);
}

TEST_CASE("stored entries match dynamic interpolation; merged models normalize") {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 6; ++trial) {
    const int order = 2 + trial % 3;
    ComponentSet comps = testing::RandomComponents(rng, 2 + trial % 2, 30, order, 60);
    auto lam = testing::RandomWeights(rng, comps.size());
    for (Method meth : {Method::kLinear, Method::kCountMerge, Method::kBayes}) {
      MergedLm m = MergeStatic({meth}, lam, comps, Parallelism::kSerial);
      CHECK(testing::MaxNormalizationError(m.lm) < 1e-6);
      for (int k = 0; k < order; ++k) {
        for (NodeIndex n = 0; n < m.lm.trie().size(k); ++n) {
          auto ng = m.lm.trie().Ngram(k, n);
          if (ng.back() == kBos) continue;
          std::span<const WordId> h(ng.data(), ng.size() - 1);
          const double dyn = InterpProb({meth}, lam, comps, ng.back(), h);
          CHECK(std::fabs(std::pow(10.0, m.lm.log_prob(k, n)) - dyn) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("merging is deterministic and order independent") {
  std::mt19937_64 rng(77);
  ComponentSet comps = testing::RandomComponents(rng, 3, 20, 3);
  ComponentSet rev({comps[2], comps[1], comps[0]});
  auto lam = WeightVector::FromValues({0.2, 0.3, 0.5});
  auto rlam = WeightVector::FromValues({0.5, 0.3, 0.2});
  MergedLm a = MergeStatic({Method::kBayes}, lam, comps, Parallelism::kSerial);
  MergedLm b = MergeStatic({Method::kBayes}, rlam, rev, Parallelism::kOpenMp);
  REQUIRE(a.lm.total_ngrams() == b.lm.total_ngrams());
  for (int k = 0; k < 3; ++k)
    for (NodeIndex n = 0; n < a.lm.trie().size(k); ++n) {
      CHECK(a.lm.log_prob(k, n) == doctest::Approx(b.lm.log_prob(k, n)).epsilon(1e-12));
      CHECK(a.lm.backoff(k, n) == doctest::Approx(b.lm.backoff(k, n)).epsilon(1e-9));
    }
  MergedLm c = MergeStatic({Method::kBayes}, lam, comps, Parallelism::kSerial);
  CHECK(Dump(a.lm) == Dump(c.lm));
  CHECK(a.lm.comments().size() == 2);
}

TEST_CASE("covered text has no gap") {
  std::mt19937_64 rng(79);
  auto words = testing::WordList(15);
  auto v = testing::MakeVocab(words);
  auto c1 = testing::RandomSentences(rng, words, 50, 6);
  auto c2 = testing::RandomSentences(rng, words, 50, 6);
  ComponentSet comps({testing::MakeComponent("a", c1, v, 3),
                      testing::MakeComponent("b", c2, v, 3)});
  // Evaluate on training sentences of component a: every trigram is stored.
  auto events = EventList::FromLines(c1, *v, 3);
  for (Method m : {Method::kLinear, Method::kCountMerge, Method::kBayes}) {
    GapReport g = DynamicStaticGap({m}, WeightVector::FromValues({0.6, 0.4}), comps, events);
    CHECK(g.uncovered_events == 0);
    CHECK(std::fabs(g.dynamic.ppl - g.merged.ppl) < 1e-6);
  }
}

TEST_CASE("count merging over-penalizes uncovered n-grams") {
  // History "x" only occurs in component a, where "z" is rare; component b
  // uses "z" a lot but never sees "x".
  std::vector<std::string> w{"x", "y", "z", "q"};
  auto v = testing::MakeVocab(w);
  std::vector<std::string> a, b;
  for (int i = 0; i < 40; ++i) a.push_back("x y");
  a.push_back("q z");
  for (int i = 0; i < 40; ++i) b.push_back("z z q");
  ComponentSet comps({testing::MakeComponent("a", a, v, 2),
                      testing::MakeComponent("b", b, v, 2)});
  const WordId x = v->find("x"), z = v->find("z");
  const WordId h[1] = {x};
  const std::vector<WordId> xz{x, z};
  CHECK(comps[0].lm->Find(xz) == kNoNode);
  CHECK(comps[1].lm->Find(xz) == kNoNode);
  auto lam = WeightVector::Uniform(2);
  MergedLm cm = MergeStatic({Method::kCountMerge}, lam, comps);
  const double dyn = InterpProb({Method::kCountMerge}, lam, comps, z, h);
  CHECK(cm.lm.Prob(z, h) > dyn);

  std::vector<std::string> text{"x z"};
  auto events = EventList::FromLines(text, *v, 2);
  GapReport g = DynamicStaticGap(cm, comps, events);
  CHECK(g.uncovered_events == 1);
  CHECK(g.dynamic.ppl > g.merged.ppl);
  GapReport li = DynamicStaticGap({Method::kLinear}, lam, comps, events);
  CHECK(std::isfinite(li.dynamic.ppl));
  CHECK(std::isfinite(li.merged.ppl));
}
