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

#include "lmmix/evaluate.h"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lmmix {

std::vector<double> EventLogProbs(const Scorer &scorer, const EventList &events,
                                  Parallelism par, std::size_t *zero_events) {
  if (events.order() != scorer.order())
    throw ArgumentError("events were built for a different model order");
  const std::size_t n = events.size();
  std::vector<double> out(n);
  const double floor = std::log(kProbFloor);
  auto score = [&](std::size_t e) {
    double p = scorer.Prob(events.word(e), events.history(e));
    return p > 0.0 ? std::log(p) : -HUGE_VAL;
  };
  if (par == Parallelism::kOpenMp) {
#pragma omp parallel for schedule(dynamic, 1024)
    for (std::size_t e = 0; e < n; ++e) out[e] = score(e);
  } else {
    for (std::size_t e = 0; e < n; ++e) out[e] = score(e);
  }
  std::size_t zeros = 0;
  for (double &v : out) {
    if (v == -HUGE_VAL) {
      v = floor;
      ++zeros;
    }
  }
  if (zero_events) *zero_events = zeros;
  return out;
}

EvalReport Perplexity(const Scorer &scorer, const EventList &events,
                      Parallelism par) {
  if (events.empty()) throw DataError("empty evaluation text");
  EvalReport r;
  auto logp = EventLogProbs(scorer, events, par, &r.zero_prob_events);
  double total = 0.0;
  for (double v : logp) total += v;
  r.events = events.size();
  r.oov_tokens = events.oov_tokens();
  r.nll = -total / static_cast<double>(r.events);
  r.ppl = std::exp(r.nll);
  return r;
}

EvalReport Perplexity(const Scorer &scorer, std::istream &text,
                      Parallelism par) {
  auto events = EventList::FromStream(text, scorer.vocab(), scorer.order());
  return Perplexity(scorer, events, par);
}

void WriteReport(std::ostream &out, const EvalReport &r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", r.nll);
  out << "nll\t" << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.1f", r.ppl);
  out << "ppl\t" << buf << '\n';
  out << "events\t" << r.events << '\n';
  out << "oov_tokens\t" << r.oov_tokens << '\n';
  out << "zero_prob_events\t" << r.zero_prob_events << '\n';
}

}  // namespace lmmix
