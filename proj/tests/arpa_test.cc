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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lmmix/arpa.h"
#include "support/oracles.h"
#include "support/synthetic.h"

using namespace lmmix;

namespace {

BackoffLm RandomModel(std::mt19937_64 &rng, int order) {
  auto words = testing::WordList(8 + rng() % 30);
  auto v = testing::MakeVocab(words);
  auto lines = testing::RandomSentences(rng, words, 40 + rng() % 100, 9);
  return *testing::Train(lines, v, order).lm;
}

std::string Dump(const BackoffLm &lm) {
  std::ostringstream out;
  WriteArpa(lm, out);
  return out.str();
}

BackoffLm Parse(const std::string &text) {
  std::istringstream in(text);
  return ReadArpa(in);
}

int ErrorLine(const std::string &text) {
  try {
    Parse(text);
  } catch (const ParseError &e) {
    return e.line();
  }
  return -1;
}

const std::string kGood =
    "\\data\\\nngram 1=3\nngram 2=1\n\n\\1-grams:\n-99\t<s>\t-0.1\n-0.3\ta\n"
    "-0.2\t</s>\n\n\\2-grams:\n-0.1\t<s> a\n\n\\end\\\n";

}  // namespace

TEST_CASE("round trip preserves entries") {
  std::mt19937_64 rng(31);
  for (int order = 1; order <= 4; ++order) {
    BackoffLm lm = RandomModel(rng, order);
    std::string text = Dump(lm);
    BackoffLm back = Parse(text);
    REQUIRE(back.order() == order);
    REQUIRE(back.vocab() == lm.vocab());
    for (int k = 0; k < order; ++k) {
      REQUIRE(back.num_ngrams(k + 1) == lm.num_ngrams(k + 1));
      for (NodeIndex n = 0; n < lm.trie().size(k); ++n) {
        CHECK(back.trie().Ngram(k, n) == lm.trie().Ngram(k, n));
        CHECK(std::fabs(back.log_prob(k, n) - lm.log_prob(k, n)) <= 5e-7);
        CHECK(back.has_backoff(k, n) == lm.has_backoff(k, n));
        CHECK(std::fabs(back.backoff(k, n) - lm.backoff(k, n)) <= 5e-7);
      }
    }
    CHECK(Dump(back) == text);
  }
}

TEST_CASE("layout") {
  BackoffLm lm = Parse(kGood);
  std::string text = Dump(lm);
  CHECK(text.find("\\data\\\nngram 1=3\nngram 2=1\n") != std::string::npos);
  CHECK(text.find("\\1-grams:\n") != std::string::npos);
  CHECK(text.find("-0.300000\ta\n") != std::string::npos);
  CHECK(text.rfind("\\end\\\n") == text.size() - 6);
}

TEST_CASE("comments survive") {
  BackoffLm lm = Parse("## domain: news\n" + kGood);
  REQUIRE(lm.comments().size() == 1);
  CHECK(lm.comments()[0] == "domain: news");
  CHECK(Dump(lm).rfind("## domain: news\n", 0) == 0);
}

TEST_CASE("parse errors carry line numbers") {
  std::string bad_count = kGood;
  bad_count.replace(bad_count.find("ngram 1=3"), 9, "ngram 1=4");
  CHECK(ErrorLine(bad_count) > 0);

  std::string bad_num = kGood;
  bad_num.replace(bad_num.find("-0.3\ta"), 6, "x0.3\ta");
  CHECK(ErrorLine(bad_num) == 7);

  std::string bad_header = kGood;
  bad_header.replace(bad_header.find("\\2-grams:"), 9, "\\3-grams:");
  CHECK(ErrorLine(bad_header) == 10);

  std::string no_end = kGood.substr(0, kGood.find("\\end\\"));
  CHECK(ErrorLine(no_end) > 0);

  std::string unknown = kGood;
  unknown.replace(unknown.find("<s> a"), 5, "b a");
  CHECK(ErrorLine(unknown) == 11);

  const std::string tri =
      "\\data\\\nngram 1=2\nngram 2=1\nngram 3=1\n\n\\1-grams:\n-0.3\ta\n-0.2\t</s>\n"
      "\n\\2-grams:\n-0.1\ta a\n\n\\3-grams:\n-0.1\ta </s> a\n\n\\end\\\n";
  CHECK(ErrorLine(tri) == 14);

  CHECK_THROWS_AS(Parse("garbage\n"), ParseError);
}

TEST_CASE("fixed vocabulary must cover the file") {
  std::vector<std::string> w{"b"};
  auto v = testing::MakeVocab(w);
  std::istringstream in(kGood);
  CHECK_THROWS_AS(ReadArpa(in, v), ParseError);
}

TEST_CASE("file helpers") {
  std::mt19937_64 rng(33);
  BackoffLm lm = RandomModel(rng, 2);
  auto dir = std::filesystem::temp_directory_path() / "lmmix_arpa_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "m.arpa").string();
  WriteArpaFile(lm, path);
  CHECK(Dump(ReadArpaFile(path)) == Dump(lm));
  CHECK_THROWS(ReadArpaFile((dir / "missing.arpa").string()));
  std::filesystem::remove_all(dir);
}
