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
// History-dependent interpolation of component models.
//
// All three methods weight component i at history h by
//
//   w_i(h) = lambda_i s_i(h) / sum_j lambda_j s_j(h)
//
// and differ only in the history statistic s_i(h):
//   linear interpolation   s_i(h) = 1
//   count merging          s_i(h) = c_i(h) / N_i
//   Bayesian interpolation s_i(h) = p_i(h), the chained probability of h
//                                   under component i

#ifndef LMMIX_INTERP_H_
#define LMMIX_INTERP_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmmix/backoff_lm.h"
#include "lmmix/counts.h"

namespace lmmix {

enum class Method { kLinear, kCountMerge, kBayes };

// What count merging does when every weighted component has c_i(h) = 0.
enum class CountMergeFallback {
  kPrior,  // use lambda unchanged
};

struct Strategy {
  Method method = Method::kLinear;
  CountMergeFallback cm_fallback = CountMergeFallback::kPrior;
};

// "li", "cm", "bi".
Strategy ParseStrategy(std::string_view name);
std::string_view MethodName(Method m);

// Nonnegative weights summing to one.
class WeightVector {
 public:
  static WeightVector Uniform(std::size_t k);
  // Rejects negative entries or sums more than `tol` away from one, then
  // renormalizes.
  static WeightVector FromValues(std::vector<double> values, double tol = 1e-9);
  // Scales nonnegative values with a positive sum onto the simplex.
  static WeightVector Normalize(std::vector<double> values);

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> values() const { return v_; }

 private:
  explicit WeightVector(std::vector<double> v) : v_(std::move(v)) {}
  std::vector<double> v_;
};

struct Component {
  std::string name;
  std::shared_ptr<const BackoffLm> lm;
  // Only needed for count merging and expected counts.
  std::shared_ptr<const NgramCounts> counts;
};

class ComponentSet {
 public:
  // Throws ArgumentError when empty, when models or tables disagree on the
  // vocabulary or order, or a model is missing.
  explicit ComponentSet(std::vector<Component> components);

  std::size_t size() const { return comps_.size(); }
  const Component &operator[](std::size_t i) const { return comps_[i]; }
  int order() const { return comps_.front().lm->order(); }
  const Vocabulary &vocab() const { return comps_.front().lm->vocab(); }
  const VocabPtr &vocab_ptr() const { return comps_.front().lm->vocab_ptr(); }
  bool has_counts() const;
  // N_i; throws ArgumentError if component i has no count table.
  std::uint64_t total_words(std::size_t i) const;
  std::vector<std::string> names() const;

 private:
  std::vector<Component> comps_;
};

// Posterior component weights at history h (truncated to order-1 tokens).
// Components with lambda_i = 0 get weight 0.
WeightVector HistoryPosterior(const Strategy &strategy,
                              const WeightVector &lambda,
                              const ComponentSet &comps,
                              std::span<const WordId> h);
// Allocation-free variant; out.size() == comps.size().
void HistoryPosterior(const Strategy &strategy, const WeightVector &lambda,
                      const ComponentSet &comps, std::span<const WordId> h,
                      std::span<double> out);

// sum_i w_i(h) p_i(w | h), in linear space.
double InterpProb(const Strategy &strategy, const WeightVector &lambda,
                  const ComponentSet &comps, WordId w,
                  std::span<const WordId> h);

// Same, given posterior weights already computed for h.
double MixProb(std::span<const double> weights, const ComponentSet &comps,
               WordId w, std::span<const WordId> h);

// Count merging in its beta form:
//   sum_i beta_i c_i(h) p_i(w|h) / sum_j beta_j c_j(h)
// nullopt when the denominator is zero.
std::optional<double> ConventionalCountMergeProb(std::span<const double> beta,
                                                 const ComponentSet &comps,
                                                 WordId w,
                                                 std::span<const WordId> h);

// beta_i = lambda_i K / N_i.
std::vector<double> LambdaToBeta(const WeightVector &lambda,
                                 std::span<const std::int64_t> n, double k);
// lambda_i = beta_i N_i / sum_j beta_j N_j.
WeightVector BetaToLambda(std::span<const double> beta,
                          std::span<const std::int64_t> n);

// N_i p_i(h): total words times the smoothed joint estimate
// (N_i / sum_j N_j) p_i(h).
double ExpectedCount(const ComponentSet &comps, std::size_t i,
                     std::span<const WordId> h);

// Weights file: "name<TAB>lambda" per line, 12 fractional digits.
struct NamedWeights {
  std::vector<std::string> names;
  WeightVector lambda = WeightVector::Uniform(1);
};
void WriteWeights(std::ostream &out, std::span<const std::string> names,
                  const WeightVector &lambda);
NamedWeights ReadWeights(std::istream &in);

}  // namespace lmmix

#endif  // LMMIX_INTERP_H_
