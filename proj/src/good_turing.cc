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

#include "lmmix/good_turing.h"

#include <cmath>
#include <sstream>

namespace lmmix {
namespace {

// Explicit mass this close to one leaves no room for backoff.
constexpr double kMinLeftover = 1e-12;

}  // namespace

std::vector<std::uint64_t> CountsOfCounts(const NgramCounts &table, int k,
                                          std::uint64_t max_r) {
  std::vector<std::uint64_t> coc(max_r + 1, 0);
  const NgramTrie &trie = table.trie();
  const int level = k - 1;
  for (NodeIndex n = 0; n < trie.size(level); ++n) {
    if (trie.word(level, n) == kBos) continue;
    std::uint64_t c = table.count(level, n);
    if (c >= 1 && c <= max_r) ++coc[c];
  }
  return coc;
}

double GoodTuringAdjustedCount(std::uint64_t r,
                               std::span<const std::uint64_t> coc) {
  if (r == 0 || r + 1 >= coc.size() || coc[r] == 0)
    return static_cast<double>(r);
  return static_cast<double>(r + 1) * static_cast<double>(coc[r + 1]) /
         static_cast<double>(coc[r]);
}

KatzDiscount::KatzDiscount(std::span<const std::uint64_t> coc, int cutoff)
    : coeff_(cutoff + 1, 1.0) {
  if (cutoff < 1) return;
  auto n = [&](std::size_t r) -> double {
    return r < coc.size() ? static_cast<double>(coc[r]) : 0.0;
  };
  if (n(1) == 0.0) {
    disabled_ = true;
    return;
  }
  const double common = (cutoff + 1) * n(cutoff + 1) / n(1);
  if (common >= 1.0) {
    disabled_ = true;
    return;
  }
  for (int r = 1; r <= cutoff; ++r) {
    if (n(r) == 0.0 || n(r + 1) == 0.0) continue;
    const double ratio = GoodTuringAdjustedCount(r, coc) / r;
    const double d = (ratio - common) / (1.0 - common);
    if (std::isfinite(d) && d > 0.0 && d <= 1.0) coeff_[r] = d;
  }
}

double KatzDiscount::coefficient(std::uint64_t r) const {
  return r < coeff_.size() ? coeff_[r] : 1.0;
}

BackoffLm EstimateGoodTuring(const NgramCounts &table, Parallelism par) {
  std::vector<std::int64_t> ones(table.order(), 1);
  return EstimateGoodTuring(table, ones, kDefaultKatzCutoff, par);
}

BackoffLm EstimateGoodTuring(const NgramCounts &table,
                             std::span<const std::int64_t> thresholds,
                             int cutoff, Parallelism par) {
  const int order = table.order();
  if (static_cast<int>(thresholds.size()) != order)
    throw ArgumentError("need one count threshold per order");
  if (thresholds[0] != 1)
    throw ArgumentError("unigram threshold must be 1");
  for (auto t : thresholds)
    if (t < 1) throw ArgumentError("count thresholds must be >= 1");
  if (table.total_words() == 0) throw DataError("empty count table");

  const NgramTrie &trie = table.trie();
  const Vocabulary &vocab = table.vocab();
  BackoffLm lm(table.vocab_ptr(), order);

  // Which entries survive: above threshold, or needed as a prefix.
  std::vector<std::vector<std::uint8_t>> keep(order);
  for (int level = order - 1; level >= 0; --level) {
    keep[level].assign(trie.size(level), level == 0 ? 1 : 0);
    if (level == 0) continue;
    for (NodeIndex n = 0; n < trie.size(level); ++n) {
      if (trie.word(level, n) != kBos &&
          static_cast<std::int64_t>(table.count(level, n)) >= thresholds[level])
        keep[level][n] = 1;
    }
    if (level + 1 < order) {
      for (NodeIndex c = 0; c < trie.size(level + 1); ++c)
        if (keep[level + 1][c]) keep[level][trie.parent(level + 1, c)] = 1;
    }
  }

  // Unigrams: every vocabulary word gets an entry.
  {
    KatzDiscount disc(CountsOfCounts(table, 1, cutoff + 1), cutoff);
    const std::size_t v = vocab.size();
    std::vector<double> counted(v, 0.0);
    for (NodeIndex n = 0; n < trie.size(0); ++n) {
      WordId w = trie.word(0, n);
      if (w != kBos) counted[w] = static_cast<double>(table.count(0, n));
    }
    std::size_t zero_words = 0;
    for (WordId w = 0; w < v; ++w)
      if (w != kBos && counted[w] == 0.0) ++zero_words;

    double total = static_cast<double>(table.total_words());
    std::vector<double> p(v, 0.0);
    double mass = 0.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
      mass = 0.0;
      for (WordId w = 0; w < v; ++w) {
        if (w == kBos || counted[w] == 0.0) continue;
        auto c = static_cast<std::uint64_t>(counted[w]);
        p[w] = disc.coefficient(c) * counted[w] / total;
        mass += p[w];
      }
      if (zero_words == 0 || 1.0 - mass > kMinLeftover) break;
      total += 1.0;
    }
    for (WordId w = 0; w < v; ++w) {
      if (w == kBos) continue;
      if (counted[w] == 0.0)
        p[w] = (1.0 - mass) / static_cast<double>(zero_words);
      else if (zero_words == 0)
        p[w] /= mass;
    }
    for (WordId w = 0; w < v; ++w) {
      const WordId id[1] = {w};
      lm.Add(id, w == kBos ? kLogProbFloor : std::log10(p[w]));
    }
  }

  // Higher orders, in the table's sorted order.
  std::vector<WordId> ng;
  const std::size_t vocab_words = vocab.size() - 1;
  for (int level = 1; level < order; ++level) {
    KatzDiscount disc(CountsOfCounts(table, level + 1, cutoff + 1), cutoff);
    const std::size_t nh = trie.size(level - 1);
    std::vector<double> total(nh, 0.0), mass(nh, 0.0);
    std::vector<std::size_t> observed(nh, 0);
    for (NodeIndex c = 0; c < trie.size(level); ++c) {
      if (trie.word(level, c) == kBos) continue;
      NodeIndex h = trie.parent(level, c);
      total[h] += static_cast<double>(table.count(level, c));
      ++observed[h];
    }
    auto discounted = [&](NodeIndex c) {
      double r = static_cast<double>(table.count(level, c));
      return disc.coefficient(table.count(level, c)) * r;
    };
    for (NodeIndex c = 0; c < trie.size(level); ++c) {
      if (!keep[level][c] || trie.word(level, c) == kBos) continue;
      NodeIndex h = trie.parent(level, c);
      mass[h] += discounted(c) / total[h];
    }
    // No room left for backoff: reserve one extra count.
    for (NodeIndex h = 0; h < nh; ++h) {
      if (total[h] > 0.0 && observed[h] < vocab_words &&
          1.0 - mass[h] <= kMinLeftover)
        total[h] += 1.0;
    }
    for (NodeIndex c = 0; c < trie.size(level); ++c) {
      if (!keep[level][c]) continue;
      ng = trie.Ngram(level, c);
      if (ng.back() == kBos) {
        lm.Add(ng, kLogProbFloor);
        continue;
      }
      NodeIndex h = trie.parent(level, c);
      lm.Add(ng, std::log10(discounted(c) / total[h]));
    }
  }

  lm.Finalize();
  lm.RecomputeBackoffs(par);

  std::ostringstream th;
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    th << (i ? "," : "") << thresholds[i];
  if (!table.domain().empty()) lm.comments().push_back("domain: " + table.domain());
  lm.comments().push_back("smoothing: katz-good-turing cutoff=" +
                          std::to_string(cutoff));
  lm.comments().push_back("thresholds: " + th.str());
  return lm;
}

}  // namespace lmmix
