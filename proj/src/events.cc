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

#include "lmmix/events.h"

#include <istream>

#include "lmmix/counts.h"

namespace lmmix {

EventList EventList::FromLines(std::span<const std::string> lines,
                               const Vocabulary &vocab, int order) {
  if (order < 1 || order > kMaxOrder) throw ArgumentError("bad order");
  EventList ev;
  ev.order_ = order;
  std::vector<WordId> padded;
  for (const auto &line : lines) {
    auto ids = MapLine(vocab, line, &ev.oov_);
    if (ids.empty()) continue;
    ++ev.sentences_;
    padded.assign(order - 1, kBos);
    padded.insert(padded.end(), ids.begin(), ids.end());
    padded.push_back(kEos);
    for (std::size_t t = order - 1; t < padded.size(); ++t)
      ev.data_.insert(ev.data_.end(), padded.begin() + (t - (order - 1)),
                      padded.begin() + t + 1);
  }
  return ev;
}

EventList EventList::FromStream(std::istream &in, const Vocabulary &vocab,
                                int order) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return FromLines(lines, vocab, order);
}

}  // namespace lmmix
