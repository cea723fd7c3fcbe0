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
// Per-domain n-gram count tables.
//
// Sentences are padded with (order-1) start markers and one end marker.
// Every k-gram (k = 1..order) of the padded sentence is counted, including
// those made only of start markers: they are histories, never predictions.

#ifndef LMMIX_COUNTS_H_
#define LMMIX_COUNTS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lmmix/ngram_trie.h"
#include "lmmix/types.h"
#include "lmmix/vocab.h"

namespace lmmix {

class NgramCounts {
 public:
  NgramCounts(VocabPtr vocab, int order, std::string domain = {});

  int order() const { return trie_.order(); }
  const Vocabulary &vocab() const { return *vocab_; }
  const VocabPtr &vocab_ptr() const { return vocab_; }
  const std::string &domain() const { return domain_; }
  void set_domain(std::string d) { domain_ = std::move(d); }

  // N: non-marker tokens plus one end marker per sentence.
  std::uint64_t total_words() const { return total_words_; }

  // 0 for absent n-grams.
  std::uint64_t Count(std::span<const WordId> ngram) const;

  // Sum of counts[(h, w)] over all w; total_words() for the empty history.
  // Throws ArgumentError when |h| > order-1.
  std::uint64_t HistoryCount(std::span<const WordId> history) const;

  const NgramTrie &trie() const { return trie_; }
  std::uint64_t count(int level, NodeIndex n) const { return counts_[level][n]; }
  std::size_t num_ngrams(int k) const { return trie_.size(k - 1); }

  // --- construction ---
  // Counts one sentence given as unpadded word ids.
  void AddSentence(std::span<const WordId> words);
  // Adds all counts of `other` (same vocabulary and order).
  void Merge(const NgramCounts &other);
  // Sorts the table and derives history counts and N. Must be called after
  // the last AddSentence/Merge and before any query.
  void Finalize();

  // Content equality (tables must be finalized).
  bool operator==(const NgramCounts &other) const;

  // "k<TAB>tok ... tok<TAB>count" per line, sorted by k then token ids.
  void Write(std::ostream &out) const;
  // `order` 0 means the highest k present in the file.
  static NgramCounts Read(std::istream &in, VocabPtr vocab, int order = 0);

 private:
  VocabPtr vocab_;
  std::string domain_;
  NgramTrie trie_;
  std::vector<std::vector<std::uint64_t>> counts_;
  std::vector<std::vector<std::uint64_t>> history_counts_;
  std::uint64_t total_words_ = 0;
  std::vector<WordId> padded_;
};

// Counts a line-oriented corpus. OOV tokens become <unk>; blank lines are
// skipped. An empty stream yields an empty table with N = 0.
NgramCounts CountNgrams(std::istream &corpus, VocabPtr vocab, int order,
                        Parallelism par = Parallelism::kOpenMp);
NgramCounts CountNgrams(std::span<const std::string> lines, VocabPtr vocab,
                        int order, Parallelism par = Parallelism::kOpenMp);

// Maps the tokens of each line to ids (OOV -> <unk>).
std::vector<WordId> MapLine(const Vocabulary &vocab, std::string_view line,
                            std::size_t *oov = nullptr);

}  // namespace lmmix

#endif  // LMMIX_COUNTS_H_
