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
// Times the serial and OpenMP paths of the main kernels on synthetic data
// and checks that both produce the same result.
//
//   bench_kernels [words-per-domain] [repeats]

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "lmmix/evaluate.h"
#include "lmmix/optimize.h"
#include "lmmix/prune.h"
#include "lmmix/static_merge.h"
#include "support/synthetic.h"

using namespace lmmix;

namespace {

int repeats = 3;

double BestOf(const std::function<void()> &f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

template <typename R>
void Compare(const char *name, const std::function<R(Parallelism)> &run,
             const std::function<double(const R &, const R &)> &diff) {
  std::optional<R> serial, parallel;
  const double ts = BestOf([&] { serial.emplace(run(Parallelism::kSerial)); });
  const double tp = BestOf([&] { parallel.emplace(run(Parallelism::kOpenMp)); });
  std::printf("%-22s serial %9.4f s  openmp %9.4f s  speedup %5.2fx  max diff %.2e\n", name, ts,
              tp, ts / tp, diff(*serial, *parallel));
}

double MaxDiff(const std::vector<double> &a, const std::vector<double> &b) {
  double d = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

}  // namespace

int main(int argc, char **argv) {
  const std::size_t words_per_domain = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 100000;
  if (argc > 2) repeats = std::atoi(argv[2]);
  std::printf("threads %d, %zu words per domain, best of %d\n", omp_get_max_threads(),
              words_per_domain, repeats);

  std::mt19937_64 rng(7);
  auto words = testing::WordList(2000);
  auto vocab = testing::MakeVocab(words);
  std::vector<testing::MarkovSource> sources;
  std::vector<std::vector<std::string>> corpora;
  for (int d = 0; d < 3; ++d) {
    std::vector<std::string> sub(words.begin() + 400 * d, words.begin() + 400 * d + 1200);
    sources.emplace_back(sub, 12, 0.3, 0.1, rng);
    corpora.push_back(sources.back().Corpus(rng, words_per_domain));
  }
  const int order = 3;

  Compare<NgramCounts>(
      "count", [&](Parallelism p) { return CountNgrams(corpora[0], vocab, order, p); },
      [](const NgramCounts &a, const NgramCounts &b) {
        return a == b ? 0.0 : 1.0;
      });

  std::vector<Component> comps;
  for (int d = 0; d < 3; ++d)
    comps.push_back(testing::MakeComponent("d" + std::to_string(d), corpora[d], vocab, order));
  ComponentSet set(std::move(comps));
  std::vector<std::string> valid_lines;
  for (int i = 0; i < 5000; ++i) valid_lines.push_back(sources[i % 3].Sentence(rng));
  auto events = EventList::FromLines(valid_lines, *vocab, order);
  auto lambda = WeightVector::FromValues({0.5, 0.3, 0.2});
  const Strategy bi{Method::kBayes};

  DynamicScorer dyn(bi, lambda, set);
  Compare<std::vector<double>>(
      "event log-probs", [&](Parallelism p) { return EventLogProbs(dyn, events, p); }, MaxDiff);

  auto table = MixtureEvents::Build(bi, set, events, Parallelism::kSerial);
  Compare<NllGradient>(
      "nll + gradient", [&](Parallelism p) { return MixtureNllAndGradient(table, lambda, p); },
      [](const NllGradient &a, const NllGradient &b) {
        return std::max(std::fabs(a.nll - b.nll), MaxDiff(a.grad, b.grad));
      });

  Compare<std::vector<double>>(
      "static merge",
      [&](Parallelism p) {
        MergedLm m = MergeStatic(bi, lambda, set, p);
        std::vector<double> out;
        for (int k = 0; k < m.lm.order(); ++k)
          for (NodeIndex n = 0; n < m.lm.trie().size(k); ++n) out.push_back(m.lm.log_prob(k, n));
        return out;
      },
      MaxDiff);

  const BackoffLm &big = *set[0].lm;
  Compare<std::vector<double>>(
      "prune scores",
      [&](Parallelism p) {
        std::vector<double> flat;
        for (auto &level : PruneScores(big, p))
          for (double d : level) flat.push_back(std::isnan(d) ? 0.0 : d);
        return flat;
      },
      MaxDiff);
  return 0;
}
