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
// Katz backoff estimation with Good-Turing discounting.

#ifndef LMMIX_GOOD_TURING_H_
#define LMMIX_GOOD_TURING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "lmmix/backoff_lm.h"
#include "lmmix/counts.h"

namespace lmmix {

inline constexpr int kDefaultKatzCutoff = 5;

// n_r for r = 0..max_r over the k-grams (k >= 1) of `table` that do not
// predict the start marker. Entry 0 is always 0.
std::vector<std::uint64_t> CountsOfCounts(const NgramCounts &table, int k,
                                          std::uint64_t max_r);

// Raw Good-Turing adjusted count r* = (r+1) n_{r+1} / n_r. `coc` is indexed
// by r. Returns r when n_r is 0 or r+1 is out of range.
double GoodTuringAdjustedCount(std::uint64_t r,
                               std::span<const std::uint64_t> coc);

// Katz discount coefficients d_r (discounted count = d_r * r) for counts
// 1..cutoff; counts above the cutoff are left alone.
//
//   d_r = (r*/r - A) / (1 - A),  A = (cutoff+1) n_{cutoff+1} / n_1
//
// If n_1 = 0 or A >= 1 discounting is disabled for the whole order. If
// n_{r+1} = 0, or d_r falls outside (0, 1], that r is left undiscounted.
class KatzDiscount {
 public:
  KatzDiscount(std::span<const std::uint64_t> coc, int cutoff);
  double coefficient(std::uint64_t r) const;
  bool disabled() const { return disabled_; }

 private:
  std::vector<double> coeff_;
  bool disabled_ = false;
};

// Builds a Katz backoff model. thresholds[k-1] is the minimum count kept
// at order k; thresholds[0] must be 1 and thresholds.size() == order.
// Unseen vocabulary words share the left-over unigram mass uniformly.
BackoffLm EstimateGoodTuring(const NgramCounts &table,
                             std::span<const std::int64_t> thresholds,
                             int cutoff = kDefaultKatzCutoff,
                             Parallelism par = Parallelism::kOpenMp);

// Thresholds of all ones.
BackoffLm EstimateGoodTuring(const NgramCounts &table,
                             Parallelism par = Parallelism::kOpenMp);

}  // namespace lmmix

#endif  // LMMIX_GOOD_TURING_H_
