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
#include <random>
#include <sstream>

#include "doctest.h"
#include "lmmix/arpa.h"
#include "lmmix/evaluate.h"
#include "support/oracles.h"
#include "support/synthetic.h"

using namespace lmmix;

namespace {

// Uniform unigram model over every word except the start marker.
BackoffLm UniformUnigram(const VocabPtr &v) {
  BackoffLm lm(v, 1);
  const double lp = -std::log10(static_cast<double>(v->size() - 1));
  for (WordId w = 0; w < v->size(); ++w)
    lm.Add(std::vector<WordId>{w}, w == kBos ? kLogProbFloor : lp);
  lm.Finalize();
  return lm;
}

}  // namespace

TEST_CASE("uniform model has perplexity V") {
  auto words = testing::WordList(9);
  auto v = testing::MakeVocab(words);
  BackoffLm lm = UniformUnigram(v);
  std::istringstream text("w1 w2 w3\nw4 oov\n\n");
  EvalReport r = Perplexity(LmScorer(lm), text);
  CHECK(r.ppl == doctest::Approx(static_cast<double>(v->size() - 1)).epsilon(1e-12));
  CHECK(r.events == 7);
  CHECK(r.oov_tokens == 1);
  CHECK(r.zero_prob_events == 0);
  CHECK(r.ppl == doctest::Approx(std::exp(r.nll)).epsilon(1e-15));
}

TEST_CASE("matches the naive scorer") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 6; ++trial) {
    const int order = 1 + trial % 4;
    auto words = testing::WordList(20);
    auto v = testing::MakeVocab(words);
    auto lines = testing::RandomSentences(rng, words, 100, 8);
    auto t = testing::Train(lines, v, order, std::vector<std::int64_t>(order, 1));
    std::stringstream arpa;
    WriteArpa(*t.lm, arpa);
    const std::string text = arpa.str();
    std::istringstream a1(text), a2(text);
    BackoffLm read = ReadArpa(a1);
    testing::NaiveArpaModel naive(a2);
    auto all = testing::WordList(24);  // a few OOV words
    auto eval = testing::RandomSentences(rng, all, 30, 9);
    auto events = EventList::FromLines(eval, read.vocab(), order);
    EvalReport r = Perplexity(LmScorer(read), events);
    CHECK(r.ppl == doctest::Approx(naive.Perplexity(eval)).epsilon(1e-10));
  }
}

TEST_CASE("degenerate mixture and sentence order") {
  std::mt19937_64 rng(93);
  ComponentSet comps = testing::RandomComponents(rng, 2, 15, 3);
  auto lines = testing::RandomSentences(rng, testing::WordList(15), 40, 7);
  auto events = EventList::FromLines(lines, comps.vocab(), 3);
  auto lam = WeightVector::FromValues({1.0, 0.0});
  for (Method m : {Method::kLinear, Method::kCountMerge, Method::kBayes}) {
    EvalReport dyn = Perplexity(DynamicScorer({m}, lam, comps), events);
    EvalReport one = Perplexity(LmScorer(*comps[0].lm), events);
    CHECK(dyn.ppl == one.ppl);
  }
  std::reverse(lines.begin(), lines.end());
  auto rev = EventList::FromLines(lines, comps.vocab(), 3);
  CHECK(Perplexity(LmScorer(*comps[1].lm), rev).ppl ==
        doctest::Approx(Perplexity(LmScorer(*comps[1].lm), events).ppl).epsilon(1e-12));
}

TEST_CASE("zero probabilities are floored and counted") {
  auto words = testing::WordList(3);
  auto v = testing::MakeVocab(words);
  BackoffLm lm(v, 1);
  for (WordId w = 0; w < v->size(); ++w)
    lm.Add(std::vector<WordId>{w}, w == v->find("w0") ? -400.0 : -0.5);
  lm.Finalize();
  std::istringstream text("w0 w1\n");
  EvalReport r = Perplexity(LmScorer(lm), text);
  CHECK(r.zero_prob_events == 1);
  CHECK(std::isfinite(r.ppl));
}

TEST_CASE("events and errors") {
  auto words = testing::WordList(4);
  auto v = testing::MakeVocab(words);
  std::vector<std::string> lines{"w0 w1", "", "w2"};
  auto ev = EventList::FromLines(lines, *v, 3);
  CHECK(ev.size() == 5);
  CHECK(ev.sentences() == 2);
  CHECK(ev.history(0)[0] == kBos);
  CHECK(ev.history(0)[1] == kBos);
  CHECK(ev.word(2) == kEos);
  CHECK(ev.history(2)[1] == v->find("w1"));

  BackoffLm lm = UniformUnigram(v);
  std::istringstream empty("\n");
  CHECK_THROWS_AS(Perplexity(LmScorer(lm), empty), DataError);
  auto ev1 = EventList::FromLines(lines, *v, 1);
  CHECK_THROWS_AS(Perplexity(LmScorer(lm), ev), ArgumentError);
  CHECK_NOTHROW(Perplexity(LmScorer(lm), ev1));

  std::ostringstream out;
  WriteReport(out, Perplexity(LmScorer(lm), ev1));
  CHECK(out.str().find("ppl\t6.0\n") != std::string::npos);
  CHECK(out.str().find("events\t5\n") != std::string::npos);
}

TEST_CASE("merged model serialization changes ppl only by rounding") {
  std::mt19937_64 rng(95);
  auto t = testing::Train(testing::RandomSentences(rng, testing::WordList(25), 200, 8),
                          testing::MakeVocab(testing::WordList(25)), 3);
  std::stringstream arpa;
  WriteArpa(*t.lm, arpa);
  BackoffLm back = ReadArpa(arpa);
  auto eval = testing::RandomSentences(rng, testing::WordList(25), 50, 8);
  auto e1 = EventList::FromLines(eval, t.lm->vocab(), 3);
  auto e2 = EventList::FromLines(eval, back.vocab(), 3);
  const double a = Perplexity(LmScorer(*t.lm), e1).ppl;
  const double b = Perplexity(LmScorer(back), e2).ppl;
  CHECK(std::fabs(a - b) / a < 1e-4);
}
