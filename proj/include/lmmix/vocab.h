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
// Closed vocabulary with reserved sentence markers.

#ifndef LMMIX_VOCAB_H_
#define LMMIX_VOCAB_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <functional>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "lmmix/types.h"

namespace lmmix {

// Transparent hashing so lookups by string_view do not allocate.
struct TokenHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};
struct TokenEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};
template <typename V>
using TokenMap = absl::flat_hash_map<std::string, V, TokenHash, TokenEq>;

inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";
inline constexpr std::string_view kUnkToken = "<unk>";

// The reserved markers always occupy the first three ids.
inline constexpr WordId kBos = 0;
inline constexpr WordId kEos = 1;
inline constexpr WordId kUnk = 2;

class Vocabulary {
 public:
  // Just the three markers.
  Vocabulary();

  // Markers first, then `tokens` in order. Markers appearing in `tokens`
  // are skipped. Throws ArgumentError on duplicates, empty tokens or
  // tokens containing whitespace.
  static Vocabulary FromTokens(std::span<const std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string &token(WordId id) const { return tokens_.at(id); }
  bool contains(std::string_view token) const;
  // kNoWord when absent.
  WordId find(std::string_view token) const;
  // Out-of-vocabulary tokens map to kUnk.
  WordId map_or_unk(std::string_view token) const;
  const std::vector<std::string> &tokens() const { return tokens_; }

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

  // One token per line, in id order (markers included).
  void Write(std::ostream &out) const;
  static Vocabulary Read(std::istream &in);

 private:
  void Add(std::string_view token);

  std::vector<std::string> tokens_;
  TokenMap<WordId> index_;
};

using VocabPtr = std::shared_ptr<const Vocabulary>;

// Vocabulary of every token with raw frequency >= min_count, ordered by
// descending frequency with ties broken lexicographically. Blank lines are
// ignored. Throws DataError("empty corpus") when the stream has no tokens.
Vocabulary BuildVocab(std::istream &corpus, std::int64_t min_count);

// Same, over several corpora at once.
Vocabulary BuildVocab(std::span<std::istream *const> corpora,
                      std::int64_t min_count);

// Splits a line on ASCII whitespace.
void SplitTokens(std::string_view line, std::vector<std::string_view> &out);

}  // namespace lmmix

#endif  // LMMIX_VOCAB_H_
