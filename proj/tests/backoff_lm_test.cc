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
#include "support/oracles.h"
#include "support/synthetic.h"

using namespace lmmix;

namespace {

constexpr const char *kToy =
    "\\data\\\n"
    "ngram 1=3\n"
    "ngram 2=2\n"
    "\n"
    "\\1-grams:\n"
    "-99\t<s>\t-0.3\n"
    "-0.5\ta\t-0.2\n"
    "-0.4\t</s>\n"
    "\n"
    "\\2-grams:\n"
    "-0.1\t<s> a\n"
    "-0.2\ta </s>\n"
    "\n"
    "\\end\\\n";

// Backoff recursion written directly against the stored tables.
double Reference(const BackoffLm &lm, std::vector<WordId> ng) {
  while (static_cast<int>(ng.size()) > lm.order()) ng.erase(ng.begin());
  NodeIndex n = lm.Find(ng);
  if (n != kNoNode) return lm.log_prob(static_cast<int>(ng.size()) - 1, n);
  if (ng.size() == 1) return kLogProbFloor;
  std::vector<WordId> h(ng.begin(), ng.end() - 1);
  NodeIndex hn = lm.Find(h);
  double bow = hn == kNoNode ? 0.0 : lm.backoff(static_cast<int>(h.size()) - 1, hn);
  ng.erase(ng.begin());
  return bow + Reference(lm, ng);
}

}  // namespace

TEST_CASE("hand-written model") {
  std::istringstream in(kToy);
  BackoffLm lm = ReadArpa(in);
  const WordId a = lm.vocab().find("a");
  const WordId s[1] = {kBos};
  const WordId ah[1] = {a};
  CHECK(lm.LogProb(a, s) == doctest::Approx(-0.1));
  CHECK(lm.LogProb(kEos, ah) == doctest::Approx(-0.2));
  // Backs off through <s>: -0.3 + -0.4.
  CHECK(lm.LogProb(kEos, s) == doctest::Approx(-0.7));
  CHECK(lm.LogProb(a, ah) == doctest::Approx(-0.7));
  // Unseen history: plain unigram.
  const WordId e[1] = {kEos};
  CHECK(lm.LogProb(a, e) == doctest::Approx(-0.5));
  // <unk> absent from the file.
  CHECK(lm.LogProb(kUnk, {}) == kLogProbFloor);
}

TEST_CASE("queries match the reference recursion") {
  std::mt19937_64 rng(21);
  auto words = testing::WordList(25);
  auto v = testing::MakeVocab(words);
  auto lines = testing::RandomSentences(rng, words, 150, 8);
  auto t = testing::Train(lines, v, 3, {1, 1, 2});
  std::uniform_int_distribution<WordId> pick(0, static_cast<WordId>(v->size() - 1));
  for (int q = 0; q < 3000; ++q) {
    std::vector<WordId> ng(1 + q % 5);
    for (auto &w : ng) w = pick(rng);
    std::span<const WordId> h(ng.data(), ng.size() - 1);
    CHECK(t.lm->LogProb(ng.back(), h) == doctest::Approx(Reference(*t.lm, ng)).epsilon(1e-13));
  }
  // Stored entries come back exactly.
  for (NodeIndex n = 0; n < t.lm->trie().size(2); ++n) {
    auto ng = t.lm->trie().Ngram(2, n);
    CHECK(t.lm->LogProb(ng[2], std::span<const WordId>(ng.data(), 2)) ==
          t.lm->log_prob(2, n));
  }
}

TEST_CASE("sequence probability") {
  std::mt19937_64 rng(23);
  auto words = testing::WordList(12);
  auto v = testing::MakeVocab(words);
  auto lines = testing::RandomSentences(rng, words, 100, 6);
  auto t = testing::Train(lines, v, 4);
  const BackoffLm &lm = *t.lm;
  CHECK(lm.SequenceLogProb({}) == 0.0);
  const WordId one[1] = {5};
  CHECK(lm.SequenceLogProb(one) == lm.LogProb(5, {}));
  const WordId three[3] = {5, 7, 3};
  const double expect = lm.LogProb(5, {}) +
                        lm.LogProb(7, std::span<const WordId>(three, 1)) +
                        lm.LogProb(3, std::span<const WordId>(three, 2));
  CHECK(lm.SequenceLogProb(three) == doctest::Approx(expect).epsilon(1e-15));
  const WordId four[4] = {5, 7, 3, 4};
  CHECK_THROWS_AS(lm.SequenceLogProb(four), ArgumentError);
}

TEST_CASE("construction rules") {
  auto v = std::make_shared<const Vocabulary>();
  BackoffLm lm(v, 2);
  lm.Add(std::vector<WordId>{kEos}, -0.5);
  CHECK_THROWS_AS(lm.Add(std::vector<WordId>{kEos}, -0.5), ArgumentError);
  CHECK_THROWS_AS(lm.Add(std::vector<WordId>{kUnk, kEos}, -0.5), ArgumentError);
  CHECK_THROWS_AS(lm.Add(std::vector<WordId>{kUnk, kEos, kEos}, -0.5), ArgumentError);
}

TEST_CASE("saturated history gets the floor weight") {
  std::vector<std::string> w{"a", "b"};
  auto v = testing::MakeVocab(w);
  BackoffLm lm(v, 2);
  const WordId a = v->find("a"), b = v->find("b");
  lm.Add(std::vector<WordId>{kBos}, kLogProbFloor);
  for (WordId x : {kEos, kUnk, a, b}) lm.Add(std::vector<WordId>{x}, std::log10(0.25));
  lm.Add(std::vector<WordId>{a, a}, std::log10(0.6));
  lm.Add(std::vector<WordId>{a, b}, std::log10(0.4));
  lm.Finalize();
  BackoffStats st = lm.RecomputeBackoffs();
  CHECK(st.saturated_histories == 1);
  NodeIndex n = lm.Find(std::vector<WordId>{a});
  CHECK(lm.backoff(0, n) == doctest::Approx(std::log10(kProbFloor)));
  CHECK(std::isfinite(lm.backoff(0, n)));
}
