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

#include "lmmix/ngram_trie.h"

#include <algorithm>
#include <numeric>

namespace lmmix {

NgramTrie::NgramTrie(int order) {
  if (order < 1 || order > kMaxOrder)
    throw ArgumentError("order must be in [1, " + std::to_string(kMaxOrder) +
                        "]");
  levels_.resize(order);
}

std::size_t NgramTrie::total_size() const {
  std::size_t n = 0;
  for (const auto &l : levels_) n += l.words.size();
  return n;
}

NodeIndex NgramTrie::Find(std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > levels_.size()) return kNoNode;
  NodeIndex node = kNoNode;
  for (std::size_t k = 0; k < ngram.size(); ++k) {
    node = Child(static_cast<int>(k), node, ngram[k]);
    if (node == kNoNode) return kNoNode;
  }
  return node;
}

std::pair<NodeIndex, bool> NgramTrie::InsertChild(int level, NodeIndex parent,
                                                  WordId w) {
  Level &l = levels_[level];
  if (level == 0) parent = kNoNode;
  auto [it, inserted] =
      l.index.try_emplace(Key(parent, w), static_cast<NodeIndex>(l.words.size()));
  if (inserted) {
    l.words.push_back(w);
    if (level > 0) l.parents.push_back(parent);
  }
  return {it->second, inserted};
}

void NgramTrie::Ngram(int level, NodeIndex n, std::span<WordId> out) const {
  for (int k = level; k >= 0; --k) {
    out[k] = levels_[k].words[n];
    if (k > 0) n = levels_[k].parents[n];
  }
}

std::vector<WordId> NgramTrie::Ngram(int level, NodeIndex n) const {
  std::vector<WordId> out(level + 1);
  Ngram(level, n, out);
  return out;
}

std::vector<std::vector<NodeIndex>> NgramTrie::Canonicalize() {
  std::vector<std::vector<NodeIndex>> perms(levels_.size());
  std::vector<NodeIndex> new_of_old_prev;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    Level &l = levels_[k];
    const std::size_t n = l.words.size();
    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (k == 0) {
      std::sort(order.begin(), order.end(),
                [&](NodeIndex a, NodeIndex b) { return l.words[a] < l.words[b]; });
    } else {
      for (auto &p : l.parents) p = new_of_old_prev[p];
      std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
        if (l.parents[a] != l.parents[b]) return l.parents[a] < l.parents[b];
        return l.words[a] < l.words[b];
      });
    }
    std::vector<NodeIndex> new_of_old(n);
    for (NodeIndex i = 0; i < n; ++i) new_of_old[order[i]] = i;
    ApplyPermutation(l.words, order);
    if (k > 0) ApplyPermutation(l.parents, order);
    if (k == 0) {
      for (auto &[key, idx] : l.index) idx = new_of_old[idx];
    } else {
      // Keys embed parent indices, which moved too.
      l.index.clear();
      for (NodeIndex i = 0; i < n; ++i) l.index.emplace(Key(l.parents[i], l.words[i]), i);
    }
    perms[k] = std::move(order);
    new_of_old_prev = std::move(new_of_old);
  }
  return perms;
}

std::vector<std::uint32_t> NgramTrie::ChildCounts(int level) const {
  std::vector<std::uint32_t> counts(size(level), 0);
  if (level + 1 < order()) {
    for (NodeIndex p : levels_[level + 1].parents) ++counts[p];
  }
  return counts;
}

void NgramTrie::Reserve(int level, std::size_t n) {
  levels_[level].words.reserve(n);
  if (level > 0) levels_[level].parents.reserve(n);
  levels_[level].index.reserve(n);
}

}  // namespace lmmix
