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

#include "lmmix/interp.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>

namespace lmmix {

Strategy ParseStrategy(std::string_view name) {
  if (name == "li") return {Method::kLinear};
  if (name == "cm") return {Method::kCountMerge};
  if (name == "bi") return {Method::kBayes};
  throw ArgumentError("unknown strategy '" + std::string(name) +
                      "' (expected li, cm or bi)");
}

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kLinear: return "li";
    case Method::kCountMerge: return "cm";
    case Method::kBayes: return "bi";
  }
  return "?";
}

WeightVector WeightVector::Uniform(std::size_t k) {
  if (k == 0) throw ArgumentError("weight vector needs at least one entry");
  return WeightVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

WeightVector WeightVector::Normalize(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("weight vector needs at least one entry");
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ArgumentError("weights must be finite and nonnegative");
    sum += v;
  }
  if (!(sum > 0.0)) throw ArgumentError("weights sum to zero");
  for (double &v : values) v /= sum;
  return WeightVector(std::move(values));
}

WeightVector WeightVector::FromValues(std::vector<double> values, double tol) {
  double sum = 0.0;
  for (double v : values) sum += v;
  if (std::abs(sum - 1.0) > tol)
    throw ArgumentError("weights do not sum to one");
  return Normalize(std::move(values));
}

ComponentSet::ComponentSet(std::vector<Component> components)
    : comps_(std::move(components)) {
  if (comps_.empty()) throw ArgumentError("empty component set");
  for (const auto &c : comps_) {
    if (!c.lm) throw ArgumentError("component '" + c.name + "' has no model");
    const auto &ref = comps_.front().lm;
    if (c.lm->order() != ref->order())
      throw ArgumentError("components have different orders");
    if (c.lm->vocab_ptr() != ref->vocab_ptr() && !(c.lm->vocab() == ref->vocab()))
      throw ArgumentError("components do not share a vocabulary");
    if (c.counts) {
      if (c.counts->order() != ref->order())
        throw ArgumentError("count table order differs from model order");
      if (c.counts->vocab_ptr() != ref->vocab_ptr() &&
          !(c.counts->vocab() == ref->vocab()))
        throw ArgumentError("count table vocabulary differs from model");
    }
  }
}

bool ComponentSet::has_counts() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const Component &c) { return c.counts != nullptr; });
}

std::uint64_t ComponentSet::total_words(std::size_t i) const {
  if (!comps_[i].counts)
    throw ArgumentError("component '" + comps_[i].name + "' has no count table");
  return comps_[i].counts->total_words();
}

std::vector<std::string> ComponentSet::names() const {
  std::vector<std::string> out;
  for (const auto &c : comps_) out.push_back(c.name);
  return out;
}

void HistoryPosterior(const Strategy &strategy, const WeightVector &lambda,
                      const ComponentSet &comps, std::span<const WordId> h,
                      std::span<double> out) {
  const std::size_t k = comps.size();
  if (lambda.size() != k || out.size() != k)
    throw ArgumentError("weight vector size does not match component count");
  const std::size_t max_ctx = static_cast<std::size_t>(comps.order() - 1);
  if (h.size() > max_ctx) h = h.last(max_ctx);

  switch (strategy.method) {
    case Method::kLinear:
      std::copy(lambda.values().begin(), lambda.values().end(), out.begin());
      return;
    case Method::kCountMerge: {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        out[i] = 0.0;
        if (lambda[i] <= 0.0) continue;
        const double n = static_cast<double>(comps.total_words(i));
        if (n <= 0.0)
          throw ArgumentError("count merging needs a nonempty count table");
        out[i] = lambda[i] *
                 static_cast<double>(comps[i].counts->HistoryCount(h)) / n;
        sum += out[i];
      }
      if (sum > 0.0) {
        for (double &v : out) v /= sum;
      } else {
        std::copy(lambda.values().begin(), lambda.values().end(), out.begin());
      }
      return;
    }
    case Method::kBayes: {
      // Natural-log weights, normalized after subtracting the maximum.
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i) {
        if (lambda[i] <= 0.0) {
          out[i] = -std::numeric_limits<double>::infinity();
          continue;
        }
        out[i] = std::log(lambda[i]) +
                 std::numbers::ln10 * comps[i].lm->SequenceLogProb(h);
        best = std::max(best, out[i]);
      }
      double sum = 0.0;
      for (double &v : out) {
        v = std::isinf(v) ? 0.0 : std::exp(v - best);
        sum += v;
      }
      for (double &v : out) v /= sum;
      return;
    }
  }
}

WeightVector HistoryPosterior(const Strategy &strategy,
                              const WeightVector &lambda,
                              const ComponentSet &comps,
                              std::span<const WordId> h) {
  std::vector<double> w(comps.size());
  HistoryPosterior(strategy, lambda, comps, h, w);
  return WeightVector::Normalize(std::move(w));
}

double MixProb(std::span<const double> weights, const ComponentSet &comps,
               WordId w, std::span<const WordId> h) {
  double p = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (weights[i] == 0.0) continue;
    p += weights[i] * comps[i].lm->Prob(w, h);
  }
  return p;
}

double InterpProb(const Strategy &strategy, const WeightVector &lambda,
                  const ComponentSet &comps, WordId w,
                  std::span<const WordId> h) {
  double buf[64];
  std::vector<double> heap;
  std::span<double> weights;
  if (comps.size() <= 64) {
    weights = std::span<double>(buf, comps.size());
  } else {
    heap.resize(comps.size());
    weights = heap;
  }
  HistoryPosterior(strategy, lambda, comps, h, weights);
  return MixProb(weights, comps, w, h);
}

std::optional<double> ConventionalCountMergeProb(std::span<const double> beta,
                                                 const ComponentSet &comps,
                                                 WordId w,
                                                 std::span<const WordId> h) {
  if (beta.size() != comps.size())
    throw ArgumentError("beta size does not match component count");
  const std::size_t max_ctx = static_cast<std::size_t>(comps.order() - 1);
  if (h.size() > max_ctx) h = h.last(max_ctx);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!comps[i].counts)
      throw ArgumentError("count merging needs count tables");
    const double c = static_cast<double>(comps[i].counts->HistoryCount(h));
    num += beta[i] * c * comps[i].lm->Prob(w, h);
    den += beta[i] * c;
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::vector<double> LambdaToBeta(const WeightVector &lambda,
                                 std::span<const std::int64_t> n, double k) {
  if (!(k > 0.0)) throw ArgumentError("K must be positive");
  if (n.size() != lambda.size()) throw ArgumentError("size mismatch");
  std::vector<double> beta(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] <= 0) throw ArgumentError("corpus sizes must be positive");
    beta[i] = lambda[i] * k / static_cast<double>(n[i]);
  }
  return beta;
}

WeightVector BetaToLambda(std::span<const double> beta,
                          std::span<const std::int64_t> n) {
  if (n.size() != beta.size() || beta.empty())
    throw ArgumentError("size mismatch");
  std::vector<double> v(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (!(beta[i] > 0.0)) throw ArgumentError("beta must be positive");
    if (n[i] <= 0) throw ArgumentError("corpus sizes must be positive");
    v[i] = beta[i] * static_cast<double>(n[i]);
  }
  return WeightVector::Normalize(std::move(v));
}

double ExpectedCount(const ComponentSet &comps, std::size_t i,
                     std::span<const WordId> h) {
  if (i >= comps.size()) throw ArgumentError("component index out of range");
  double total = 0.0;
  for (std::size_t j = 0; j < comps.size(); ++j)
    total += static_cast<double>(comps.total_words(j));
  const double n_i = static_cast<double>(comps.total_words(i));
  const double p_h = std::pow(10.0, comps[i].lm->SequenceLogProb(h));
  return total * (n_i / total * p_h);
}

void WriteWeights(std::ostream &out, std::span<const std::string> names,
                  const WeightVector &lambda) {
  if (names.size() != lambda.size()) throw ArgumentError("size mismatch");
  char buf[64];
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12f", lambda[i]);
    out << names[i] << '\t' << buf << '\n';
  }
}

NamedWeights ReadWeights(std::istream &in) {
  NamedWeights result;
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError("expected name<TAB>lambda", lineno);
    std::string_view num(line);
    num.remove_prefix(tab + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw ParseError("non-numeric weight", lineno);
    if (v < 0.0) throw ParseError("negative weight", lineno);
    result.names.push_back(line.substr(0, tab));
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("no weights", lineno);
  try {
    result.lambda = WeightVector::FromValues(std::move(values), 1e-9);
  } catch (const ArgumentError &e) {
    throw ParseError(e.what(), 0);
  }
  return result;
}

}  // namespace lmmix
