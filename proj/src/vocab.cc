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

#include "lmmix/vocab.h"

#include <algorithm>
#include <istream>
#include <ostream>

namespace lmmix {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsReserved(std::string_view token) {
  return token == kBosToken || token == kEosToken || token == kUnkToken;
}

}  // namespace

void SplitTokens(std::string_view line, std::vector<std::string_view> &out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

Vocabulary::Vocabulary() {
  Add(kBosToken);
  Add(kEosToken);
  Add(kUnkToken);
}

void Vocabulary::Add(std::string_view token) {
  if (token.empty()) throw ArgumentError("empty vocabulary token");
  if (std::any_of(token.begin(), token.end(), IsSpace))
    throw ArgumentError("vocabulary token contains whitespace: '" +
                        std::string(token) + "'");
  auto [it, inserted] =
      index_.emplace(std::string(token), static_cast<WordId>(tokens_.size()));
  if (!inserted)
    throw ArgumentError("duplicate vocabulary token: " + std::string(token));
  tokens_.emplace_back(token);
}

Vocabulary Vocabulary::FromTokens(std::span<const std::string> tokens) {
  Vocabulary vocab;
  for (const auto &t : tokens) {
    if (IsReserved(t)) continue;
    vocab.Add(t);
  }
  return vocab;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(token);
}

WordId Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kNoWord : it->second;
}

WordId Vocabulary::map_or_unk(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

void Vocabulary::Write(std::ostream &out) const {
  for (const auto &t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::Read(std::istream &in) {
  std::vector<std::string> tokens;
  std::string line;
  std::vector<std::string_view> parts;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    SplitTokens(line, parts);
    if (parts.empty()) continue;
    if (parts.size() != 1)
      throw ParseError("expected one token per line", lineno);
    tokens.emplace_back(parts[0]);
  }
  try {
    return FromTokens(tokens);
  } catch (const ArgumentError &e) {
    throw ParseError(e.what(), 0);
  }
}

Vocabulary BuildVocab(std::istream &corpus, std::int64_t min_count) {
  std::istream *one[] = {&corpus};
  return BuildVocab(one, min_count);
}

Vocabulary BuildVocab(std::span<std::istream *const> corpora,
                      std::int64_t min_count) {
  if (min_count < 1) throw ArgumentError("min_count must be >= 1");
  TokenMap<std::int64_t> freq;
  std::int64_t total = 0;
  std::string line;
  std::vector<std::string_view> parts;
  for (std::istream *in : corpora) {
    while (std::getline(*in, line)) {
      SplitTokens(line, parts);
      for (auto p : parts) {
        auto it = freq.find(p);
        if (it == freq.end()) it = freq.emplace(std::string(p), 0).first;
        ++it->second;
        ++total;
      }
    }
  }
  if (total == 0) throw DataError("empty corpus");

  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (auto &[tok, c] : freq) {
    if (c >= min_count && !IsReserved(tok)) kept.emplace_back(tok, c);
  }
  std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto &[tok, c] : kept) tokens.push_back(std::move(tok));
  return Vocabulary::FromTokens(tokens);
}

}  // namespace lmmix
