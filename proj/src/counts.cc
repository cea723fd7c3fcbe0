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

#include "lmmix/counts.h"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

namespace lmmix {

std::vector<WordId> MapLine(const Vocabulary &vocab, std::string_view line,
                            std::size_t *oov) {
  std::vector<std::string_view> parts;
  SplitTokens(line, parts);
  std::vector<WordId> ids;
  ids.reserve(parts.size());
  for (auto p : parts) {
    WordId id = vocab.find(p);
    if (id == kNoWord) {
      id = kUnk;
      if (oov) ++*oov;
    }
    ids.push_back(id);
  }
  return ids;
}

NgramCounts::NgramCounts(VocabPtr vocab, int order, std::string domain)
    : vocab_(std::move(vocab)),
      domain_(std::move(domain)),
      trie_(order),
      counts_(order) {
  if (!vocab_) throw ArgumentError("null vocabulary");
}

void NgramCounts::AddSentence(std::span<const WordId> words) {
  const int n = order();
  padded_.assign(n - 1, kBos);
  padded_.insert(padded_.end(), words.begin(), words.end());
  padded_.push_back(kEos);
  const std::size_t len = padded_.size();
  for (std::size_t start = 0; start < len; ++start) {
    NodeIndex node = kNoNode;
    for (int k = 0; k < n && start + k < len; ++k) {
      node = trie_.InsertChild(k, node, padded_[start + k]).first;
      if (counts_[k].size() <= node) counts_[k].resize(node + 1, 0);
      ++counts_[k][node];
    }
  }
}

void NgramCounts::Merge(const NgramCounts &other) {
  if (other.order() != order())
    throw ArgumentError("cannot merge count tables of different orders");
  std::vector<NodeIndex> prev, cur;
  for (int k = 0; k < order(); ++k) {
    const std::size_t n = other.trie_.size(k);
    cur.resize(n);
    for (NodeIndex i = 0; i < n; ++i) {
      NodeIndex parent = k == 0 ? kNoNode : prev[other.trie_.parent(k, i)];
      NodeIndex node = trie_.InsertChild(k, parent, other.trie_.word(k, i)).first;
      if (counts_[k].size() <= node) counts_[k].resize(node + 1, 0);
      counts_[k][node] += other.counts_[k][i];
      cur[i] = node;
    }
    prev.swap(cur);
  }
}

void NgramCounts::Finalize() {
  for (int k = 0; k < order(); ++k) counts_[k].resize(trie_.size(k), 0);
  auto perms = trie_.Canonicalize();
  for (int k = 0; k < order(); ++k) ApplyPermutation(counts_[k], perms[k]);

  history_counts_.assign(std::max(order() - 1, 0), {});
  for (int k = 0; k + 1 < order(); ++k) {
    history_counts_[k].assign(trie_.size(k), 0);
    for (NodeIndex c = 0; c < trie_.size(k + 1); ++c)
      history_counts_[k][trie_.parent(k + 1, c)] += counts_[k + 1][c];
  }
  total_words_ = 0;
  for (NodeIndex u = 0; u < trie_.size(0); ++u)
    if (trie_.word(0, u) != kBos) total_words_ += counts_[0][u];
}

std::uint64_t NgramCounts::Count(std::span<const WordId> ngram) const {
  NodeIndex n = trie_.Find(ngram);
  return n == kNoNode ? 0 : counts_[ngram.size() - 1][n];
}

std::uint64_t NgramCounts::HistoryCount(std::span<const WordId> history) const {
  if (static_cast<int>(history.size()) > order() - 1)
    throw ArgumentError("history longer than order-1");
  if (history.empty()) return total_words_;
  NodeIndex n = trie_.Find(history);
  return n == kNoNode ? 0 : history_counts_[history.size() - 1][n];
}

bool NgramCounts::operator==(const NgramCounts &other) const {
  if (order() != other.order() || total_words_ != other.total_words_)
    return false;
  for (int k = 0; k < order(); ++k) {
    if (trie_.size(k) != other.trie_.size(k)) return false;
    if (counts_[k] != other.counts_[k]) return false;
    for (NodeIndex i = 0; i < trie_.size(k); ++i) {
      if (trie_.word(k, i) != other.trie_.word(k, i)) return false;
      if (k > 0 && trie_.parent(k, i) != other.trie_.parent(k, i)) return false;
    }
  }
  return true;
}

void NgramCounts::Write(std::ostream &out) const {
  std::vector<WordId> ids;
  std::string line;
  for (int k = 0; k < order(); ++k) {
    ids.resize(k + 1);
    for (NodeIndex i = 0; i < trie_.size(k); ++i) {
      trie_.Ngram(k, i, ids);
      line = std::to_string(k + 1);
      line += '\t';
      for (int j = 0; j <= k; ++j) {
        if (j) line += ' ';
        line += vocab_->token(ids[j]);
      }
      line += '\t';
      line += std::to_string(counts_[k][i]);
      line += '\n';
      out << line;
    }
  }
}

NgramCounts NgramCounts::Read(std::istream &in, VocabPtr vocab, int order) {
  struct Record {
    int k;
    std::vector<WordId> ids;
    std::uint64_t count;
    std::size_t line;
  };
  std::vector<Record> records;
  std::string line;
  std::size_t lineno = 0;
  int max_k = 0;
  std::vector<std::string_view> toks;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError("expected k<TAB>ngram<TAB>count", lineno);
    std::string_view sv(line);
    Record r{0, {}, 0, lineno};
    auto kf = sv.substr(0, t1);
    auto cf = sv.substr(t2 + 1);
    if (std::from_chars(kf.data(), kf.data() + kf.size(), r.k).ec != std::errc{} ||
        r.k < 1)
      throw ParseError("bad order field", lineno);
    auto [ptr, ec] = std::from_chars(cf.data(), cf.data() + cf.size(), r.count);
    if (ec != std::errc{} || ptr != cf.data() + cf.size())
      throw ParseError("bad count field", lineno);
    SplitTokens(sv.substr(t1 + 1, t2 - t1 - 1), toks);
    if (static_cast<int>(toks.size()) != r.k)
      throw ParseError("n-gram length does not match k", lineno);
    for (auto tok : toks) {
      WordId id = vocab->find(tok);
      if (id == kNoWord)
        throw ParseError("token not in vocabulary: " + std::string(tok), lineno);
      r.ids.push_back(id);
    }
    max_k = std::max(max_k, r.k);
    records.push_back(std::move(r));
  }
  if (order == 0) order = std::max(max_k, 1);
  if (max_k > order) throw ParseError("n-gram order exceeds table order", 0);

  NgramCounts table(std::move(vocab), order);
  std::stable_sort(records.begin(), records.end(),
                   [](const Record &a, const Record &b) { return a.k < b.k; });
  for (const auto &r : records) {
    NodeIndex parent = kNoNode;
    if (r.k > 1) {
      parent = table.trie_.Find(std::span(r.ids).first(r.k - 1));
      if (parent == kNoNode)
        throw ParseError("n-gram prefix missing from table", r.line);
    }
    auto [node, inserted] = table.trie_.InsertChild(r.k - 1, parent, r.ids.back());
    if (!inserted) throw ParseError("duplicate n-gram", r.line);
    auto &c = table.counts_[r.k - 1];
    if (c.size() <= node) c.resize(node + 1, 0);
    c[node] = r.count;
  }
  table.Finalize();
  return table;
}

NgramCounts CountNgrams(std::span<const std::string> lines, VocabPtr vocab,
                        int order, Parallelism par) {
  NgramCounts table(vocab, order);
  if (par == Parallelism::kSerial) {
    for (const auto &line : lines) {
      auto ids = MapLine(*vocab, line);
      if (!ids.empty()) table.AddSentence(ids);
    }
    table.Finalize();
    return table;
  }

  // Disjoint contiguous shards, merged in shard order.
  const int shards = std::max(2, omp_get_max_threads());
  std::vector<NgramCounts> partial;
  partial.reserve(shards);
  for (int s = 0; s < shards; ++s) partial.emplace_back(vocab, order);
  const std::size_t n = lines.size();
#pragma omp parallel for schedule(static, 1)
  for (int s = 0; s < shards; ++s) {
    const std::size_t begin = n * s / shards, end = n * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) {
      auto ids = MapLine(*vocab, lines[i]);
      if (!ids.empty()) partial[s].AddSentence(ids);
    }
  }
  for (auto &p : partial) table.Merge(p);
  table.Finalize();
  return table;
}

NgramCounts CountNgrams(std::istream &corpus, VocabPtr vocab, int order,
                        Parallelism par) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(corpus, line)) lines.push_back(std::move(line));
  return CountNgrams(lines, std::move(vocab), order, par);
}

}  // namespace lmmix
