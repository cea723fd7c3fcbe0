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
// Prefix trie over word ids. Level k (0-based) holds the (k+1)-grams; every
// node at level k > 0 points at its prefix node at level k-1, so the
// structure is prefix-closed by construction. Nodes are addressed by dense
// per-level indices, which lets owners keep their payload in parallel
// vectors.
//
// After Canonicalize() the nodes of every level are sorted
// lexicographically by their full id sequence, so node indices (and any
// iteration over them) depend only on the set of stored n-grams.

#ifndef LMMIX_NGRAM_TRIE_H_
#define LMMIX_NGRAM_TRIE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "lmmix/types.h"

namespace lmmix {

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = 0xFFFFFFFFu;

class NgramTrie {
 public:
  explicit NgramTrie(int order = 1);

  int order() const { return static_cast<int>(levels_.size()); }
  std::size_t size(int level) const { return levels_[level].words.size(); }
  std::size_t total_size() const;

  // Child of `parent` (ignored at level 0) with last word `w`, or kNoNode.
  NodeIndex Child(int level, NodeIndex parent, WordId w) const {
    const auto &map = levels_[level].index;
    auto it = map.find(Key(level == 0 ? kNoNode : parent, w));
    return it == map.end() ? kNoNode : it->second;
  }

  // Node for the full n-gram (level = ngram.size() - 1), or kNoNode.
  NodeIndex Find(std::span<const WordId> ngram) const;

  // Returns the node and whether it was newly created.
  std::pair<NodeIndex, bool> InsertChild(int level, NodeIndex parent,
                                         WordId w);

  WordId word(int level, NodeIndex n) const { return levels_[level].words[n]; }
  NodeIndex parent(int level, NodeIndex n) const {
    return level == 0 ? kNoNode : levels_[level].parents[n];
  }

  // Writes the n-gram of node n at `level` into out (size level+1).
  void Ngram(int level, NodeIndex n, std::span<WordId> out) const;
  std::vector<WordId> Ngram(int level, NodeIndex n) const;

  // Sorts every level lexicographically. Returns, per level, the old index
  // of each new position so callers can permute their payload.
  std::vector<std::vector<NodeIndex>> Canonicalize();

  // Number of children of each node at `level` (level < order-1).
  std::vector<std::uint32_t> ChildCounts(int level) const;

  void Reserve(int level, std::size_t n);

 private:
  static std::uint64_t Key(NodeIndex parent, WordId w) {
    return (static_cast<std::uint64_t>(parent) << 32) | w;
  }

  struct Level {
    std::vector<WordId> words;
    std::vector<NodeIndex> parents;
    absl::flat_hash_map<std::uint64_t, NodeIndex> index;
  };
  std::vector<Level> levels_;
};

// Applies a permutation produced by NgramTrie::Canonicalize.
template <typename T>
void ApplyPermutation(std::vector<T> &values,
                      const std::vector<NodeIndex> &old_of_new) {
  std::vector<T> out;
  out.reserve(values.size());
  for (NodeIndex old : old_of_new) out.push_back(values[old]);
  values.swap(out);
}

}  // namespace lmmix

#endif  // LMMIX_NGRAM_TRIE_H_
