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

#include "lmmix/arpa.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "lmmix/file_util.h"

namespace lmmix {
namespace {

void AppendValue(std::string &out, double v) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string_view s(buf, n);
  if (s == "-0.000000") s = "0.000000";
  out += s;
}

bool ParseDouble(std::string_view s, double &v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

// "\k-grams:" -> k, else 0.
int SectionOrder(std::string_view s) {
  if (s.size() < 9 || s.front() != '\\' || !s.ends_with("-grams:")) return 0;
  int k = 0;
  auto digits = s.substr(1, s.size() - 8);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return 0;
  return k;
}

}  // namespace

void WriteArpa(const BackoffLm &lm, std::ostream &out) {
  for (const auto &c : lm.comments()) out << "## " << c << '\n';
  out << "\\data\\\n";
  for (int k = 1; k <= lm.order(); ++k)
    out << "ngram " << k << '=' << lm.num_ngrams(k) << '\n';
  const NgramTrie &trie = lm.trie();
  const Vocabulary &vocab = lm.vocab();
  std::vector<WordId> ids;
  std::string line;
  for (int k = 1; k <= lm.order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    const int level = k - 1;
    ids.resize(k);
    for (NodeIndex n = 0; n < trie.size(level); ++n) {
      trie.Ngram(level, n, ids);
      line.clear();
      AppendValue(line, lm.log_prob(level, n));
      line += '\t';
      for (int j = 0; j < k; ++j) {
        if (j) line += ' ';
        line += vocab.token(ids[j]);
      }
      if (lm.has_backoff(level, n)) {
        line += '\t';
        AppendValue(line, lm.backoff(level, n));
      }
      line += '\n';
      out << line;
    }
  }
  out << "\n\\end\\\n";
}

BackoffLm ReadArpa(std::istream &in, VocabPtr vocab) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> comments;

  bool found_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = Trim(line);
    if (s == "\\data\\") {
      found_data = true;
      break;
    }
    if (s.starts_with("##")) {
      s.remove_prefix(2);
      if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      comments.emplace_back(s);
    }
  }
  if (!found_data) throw ParseError("missing \\data\\ header", lineno);

  std::vector<std::size_t> declared;
  std::string_view s;
  while (true) {
    if (!std::getline(in, line)) throw ParseError("unexpected end of file", lineno);
    ++lineno;
    s = Trim(line);
    if (s.empty()) continue;
    if (!s.starts_with("ngram ")) break;
    auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError("malformed ngram count line", lineno);
    int k = 0;
    std::size_t n = 0;
    auto ks = Trim(s.substr(6, eq - 6));
    auto ns = Trim(s.substr(eq + 1));
    if (std::from_chars(ks.data(), ks.data() + ks.size(), k).ec != std::errc{} ||
        std::from_chars(ns.data(), ns.data() + ns.size(), n).ec != std::errc{})
      throw ParseError("malformed ngram count line", lineno);
    if (k != static_cast<int>(declared.size()) + 1)
      throw ParseError("ngram counts must be listed for k = 1, 2, ...", lineno);
    declared.push_back(n);
  }
  if (declared.empty()) throw ParseError("no ngram counts declared", lineno);
  const int order = static_cast<int>(declared.size());
  if (order > kMaxOrder) throw ParseError("order too large", lineno);

  std::optional<BackoffLm> lm;
  std::vector<std::string_view> fields;
  std::vector<WordId> ids;

  struct Unigram {
    std::string token;
    double lp;
    std::optional<double> bow;
    std::size_t line;
  };
  std::vector<Unigram> unigrams;

  int expected = 1;
  std::size_t in_section = 0;
  int section = 0;
  auto close_section = [&](std::size_t at) {
    if (section == 0) return;
    if (in_section != declared[section - 1])
      throw ParseError("section \\" + std::to_string(section) + "-grams: has " +
                           std::to_string(in_section) + " entries, header says " +
                           std::to_string(declared[section - 1]),
                       at);
    if (section == 1) {
      if (!vocab) {
        std::vector<std::string> tokens;
        for (auto &u : unigrams) tokens.push_back(u.token);
        try {
          vocab = std::make_shared<const Vocabulary>(Vocabulary::FromTokens(tokens));
        } catch (const ArgumentError &e) {
          throw ParseError(e.what(), at);
        }
      }
      lm.emplace(vocab, order);
      for (auto &u : unigrams) {
        WordId id = vocab->find(u.token);
        if (id == kNoWord) throw ParseError("token not in vocabulary: " + u.token, u.line);
        const WordId one[1] = {id};
        try {
          lm->Add(one, u.lp, u.bow);
        } catch (const ArgumentError &e) {
          throw ParseError(e.what(), u.line);
        }
      }
      unigrams.clear();
    }
    section = 0;
  };

  bool ended = false;
  while (true) {
    if (s.empty()) {
      // skip
    } else if (s == "\\end\\") {
      close_section(lineno);
      ended = true;
      break;
    } else if (s.front() == '\\') {
      int k = SectionOrder(s);
      if (k == 0) throw ParseError("malformed section header: " + std::string(s), lineno);
      if (k != expected) throw ParseError("unexpected section order", lineno);
      close_section(lineno);
      section = k;
      ++expected;
      in_section = 0;
    } else {
      if (section == 0) throw ParseError("entry outside of a section", lineno);
      SplitTokens(s, fields);
      const std::size_t k = static_cast<std::size_t>(section);
      if (fields.size() != k + 1 && fields.size() != k + 2)
        throw ParseError("wrong number of fields", lineno);
      double lp = 0.0;
      if (!ParseDouble(fields[0], lp)) throw ParseError("non-numeric probability", lineno);
      if (!std::isfinite(lp)) lp = kLogProbFloor;
      std::optional<double> bow;
      if (fields.size() == k + 2) {
        double b = 0.0;
        if (!ParseDouble(fields[k + 1], b)) throw ParseError("non-numeric backoff weight", lineno);
        if (!std::isfinite(b)) b = kLogProbFloor;
        bow = b;
      }
      if (section == 1) {
        unigrams.push_back({std::string(fields[1]), lp, bow, lineno});
      } else {
        ids.clear();
        for (std::size_t j = 1; j <= k; ++j) {
          WordId id = vocab->find(fields[j]);
          if (id == kNoWord)
            throw ParseError("token not in vocabulary: " + std::string(fields[j]), lineno);
          ids.push_back(id);
        }
        try {
          lm->Add(ids, lp, bow);
        } catch (const ArgumentError &e) {
          throw ParseError(e.what(), lineno);
        }
      }
      ++in_section;
    }
    if (!std::getline(in, line)) break;
    ++lineno;
    s = Trim(line);
  }
  if (!ended) throw ParseError("missing \\end\\", lineno);
  if (expected != order + 1) throw ParseError("missing n-gram sections", lineno);
  lm->Finalize();
  lm->comments() = std::move(comments);
  return std::move(*lm);
}

void WriteArpaFile(const BackoffLm &lm, const std::string &path) {
  AtomicWrite(path, [&](std::ostream &out) { WriteArpa(lm, out); });
}

BackoffLm ReadArpaFile(const std::string &path, VocabPtr vocab) {
  auto in = OpenInput(path);
  return ReadArpa(in, std::move(vocab));
}

}  // namespace lmmix
