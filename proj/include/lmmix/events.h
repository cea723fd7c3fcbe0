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
// Prediction events of a text: every token plus one end marker per
// sentence, each paired with its (order-1)-token history over the sentence
// padded with start markers.

#ifndef LMMIX_EVENTS_H_
#define LMMIX_EVENTS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lmmix/types.h"
#include "lmmix/vocab.h"

namespace lmmix {

class EventList {
 public:
  // OOV tokens become <unk> and are counted; blank lines are skipped.
  static EventList FromLines(std::span<const std::string> lines,
                             const Vocabulary &vocab, int order);
  static EventList FromStream(std::istream &in, const Vocabulary &vocab,
                              int order);

  int order() const { return order_; }
  std::size_t size() const { return order_ ? data_.size() / order_ : 0; }
  bool empty() const { return data_.empty(); }
  WordId word(std::size_t e) const { return data_[e * order_ + order_ - 1]; }
  std::span<const WordId> history(std::size_t e) const {
    return {data_.data() + e * order_, static_cast<std::size_t>(order_ - 1)};
  }
  // history followed by the word.
  std::span<const WordId> ngram(std::size_t e) const {
    return {data_.data() + e * order_, static_cast<std::size_t>(order_)};
  }
  std::size_t oov_tokens() const { return oov_; }
  std::size_t sentences() const { return sentences_; }

 private:
  int order_ = 1;
  std::vector<WordId> data_;
  std::size_t oov_ = 0;
  std::size_t sentences_ = 0;
};

}  // namespace lmmix

#endif  // LMMIX_EVENTS_H_
