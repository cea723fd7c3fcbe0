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
// lmmix: train, interpolate, merge, prune and evaluate backoff n-gram
// models.
//
//   lmmix vocab  --min-count 3 --out V corpus...
//   lmmix count  --vocab V --order 4 --out C corpus
//   lmmix train  corpus --order 4 --thresholds 1,2,3,5 [--vocab V] --out M
//   lmmix fit    --lm A --lm B [--counts ...] --valid T --strategy cm --out W
//   lmmix merge  --lm A --lm B [--counts ...] --weights W|uniform --strategy cm --out M
//   lmmix prune  --lm M --prune-threshold 1e-8 --out P
//   lmmix ppl    --lm M [--lm ...] [--weights W|uniform] [--strategy s] [--gap] text

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmmix/arpa.h"
#include "lmmix/counts.h"
#include "lmmix/evaluate.h"
#include "lmmix/file_util.h"
#include "lmmix/good_turing.h"
#include "lmmix/interp.h"
#include "lmmix/optimize.h"
#include "lmmix/prune.h"
#include "lmmix/static_merge.h"
#include "lmmix/vocab.h"

namespace {

using namespace lmmix;

std::string Stem(const std::string &path) {
  return std::filesystem::path(path).stem().string();
}

VocabPtr LoadVocab(const std::string &path) {
  auto in = OpenInput(path);
  return std::make_shared<const Vocabulary>(Vocabulary::Read(in));
}

std::vector<std::int64_t> ParseThresholds(const std::string &arg, int order) {
  std::vector<std::int64_t> out;
  if (arg.empty()) {
    out.assign(order, 1);
    return out;
  }
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw ArgumentError("bad --thresholds entry '" + item + "'");
    out.push_back(v);
  }
  if (static_cast<int>(out.size()) != order)
    throw ArgumentError("--thresholds needs one value per order");
  return out;
}

struct ModelInputs {
  std::vector<std::string> lms;
  std::vector<std::string> counts;
  std::string vocab;
};

void AddModelOptions(CLI::App *cmd, ModelInputs &in, bool required = true) {
  auto *lm = cmd->add_option("--lm", in.lms, "component ARPA model (repeatable)")
                 ->allow_extra_args(false)
                 ->check(CLI::ExistingFile);
  if (required) lm->required();
  cmd->add_option("--counts", in.counts, "count table per component, same order as --lm")
      ->allow_extra_args(false)
      ->check(CLI::ExistingFile);
  cmd->add_option("--vocab", in.vocab, "shared vocabulary file")->check(CLI::ExistingFile);
}

ComponentSet LoadComponents(const ModelInputs &in) {
  if (!in.counts.empty() && in.counts.size() != in.lms.size())
    throw ArgumentError("give one --counts per --lm");
  VocabPtr vocab = in.vocab.empty() ? nullptr : LoadVocab(in.vocab);
  std::vector<Component> comps;
  for (std::size_t i = 0; i < in.lms.size(); ++i) {
    auto lm = std::make_shared<const BackoffLm>(ReadArpaFile(in.lms[i], vocab));
    if (!vocab) vocab = lm->vocab_ptr();
    std::shared_ptr<const NgramCounts> counts;
    if (!in.counts.empty()) {
      auto cin = OpenInput(in.counts[i]);
      counts = std::make_shared<const NgramCounts>(NgramCounts::Read(cin, vocab, lm->order()));
    }
    comps.push_back({Stem(in.lms[i]), std::move(lm), std::move(counts)});
  }
  return ComponentSet(std::move(comps));
}

void RequireCounts(const Strategy &s, const ComponentSet &comps) {
  if (s.method == Method::kCountMerge && !comps.has_counts())
    throw ArgumentError("strategy cm needs --counts for every component");
}

WeightVector LoadWeights(const std::string &arg, const ComponentSet &comps) {
  if (arg.empty() || arg == "uniform") return WeightVector::Uniform(comps.size());
  auto in = OpenInput(arg);
  NamedWeights w = ReadWeights(in);
  if (w.names.size() != comps.size())
    throw ArgumentError("weights file has " + std::to_string(w.names.size()) +
                        " entries for " + std::to_string(comps.size()) + " components");
  auto names = comps.names();
  std::vector<double> ordered(comps.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = std::find(w.names.begin(), w.names.end(), names[i]);
    if (it == w.names.end()) throw ArgumentError("no weight for component '" + names[i] + "'");
    ordered[i] = w.lambda[static_cast<std::size_t>(it - w.names.begin())];
  }
  return WeightVector::Normalize(std::move(ordered));
}

EventList LoadEvents(const std::string &path, const Vocabulary &vocab, int order) {
  auto in = OpenInput(path);
  return EventList::FromStream(in, vocab, order);
}

void PrintReport(const EvalReport &r, const std::string &prefix = "") {
  std::ostringstream out;
  WriteReport(out, r);
  std::istringstream lines(out.str());
  std::string line;
  while (std::getline(lines, line)) std::cout << prefix << line << '\n';
}

int Run(int argc, char **argv) {
  CLI::App app{"Mixtures of backoff n-gram language models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lmmix 0.1.0");

  // vocab
  auto *vocab_cmd = app.add_subcommand("vocab", "build a vocabulary from corpora");
  std::vector<std::string> vocab_corpora;
  std::int64_t min_count = 1;
  std::string vocab_out;
  vocab_cmd->add_option("corpora", vocab_corpora, "corpus files")
      ->required()->check(CLI::ExistingFile);
  vocab_cmd->add_option("--min-count", min_count, "minimum token frequency");
  vocab_cmd->add_option("--out", vocab_out, "output path")->required();

  // count
  auto *count_cmd = app.add_subcommand("count", "count n-grams of a corpus");
  std::string count_corpus, count_vocab, count_out;
  int count_order = 3;
  count_cmd->add_option("corpus", count_corpus)->required()->check(CLI::ExistingFile);
  count_cmd->add_option("--vocab", count_vocab)->required()->check(CLI::ExistingFile);
  count_cmd->add_option("--order", count_order)->check(CLI::Range(1, kMaxOrder));
  count_cmd->add_option("--out", count_out)->required();

  // train
  auto *train_cmd = app.add_subcommand("train", "estimate a Katz/Good-Turing model");
  std::string train_corpus, train_vocab, train_thresholds, train_out, train_counts_out;
  int train_order = 3;
  std::int64_t train_min_count = 1;
  train_cmd->add_option("corpus", train_corpus)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--order", train_order)->check(CLI::Range(1, kMaxOrder));
  train_cmd->add_option("--thresholds", train_thresholds, "per-order minimum counts, e.g. 1,2,3,5");
  train_cmd->add_option("--vocab", train_vocab)->check(CLI::ExistingFile);
  train_cmd->add_option("--min-count", train_min_count, "when no --vocab is given");
  train_cmd->add_option("--counts-out", train_counts_out, "also write the count table");
  train_cmd->add_option("--out", train_out)->required();

  // fit
  auto *fit_cmd = app.add_subcommand("fit", "fit interpolation weights on validation text");
  ModelInputs fit_in;
  AddModelOptions(fit_cmd, fit_in);
  std::string fit_valid, fit_strategy = "li", fit_init, fit_trace, fit_out;
  int fit_restarts = 4, fit_max_iter = 500;
  std::uint64_t fit_seed = 1;
  double fit_tol = 1e-7;
  fit_cmd->add_option("--valid", fit_valid)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--strategy", fit_strategy)->check(CLI::IsMember({"li", "cm", "bi"}));
  fit_cmd->add_option("--restarts", fit_restarts)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--seed", fit_seed);
  fit_cmd->add_option("--tol", fit_tol)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--max-iterations", fit_max_iter)->check(CLI::PositiveNumber);
  fit_cmd->add_option("--init", fit_init, "weights file or 'uniform'");
  fit_cmd->add_option("--trace", fit_trace, "write 'iter nll gradnorm' lines per restart");
  fit_cmd->add_option("--out", fit_out)->required();

  // merge
  auto *merge_cmd = app.add_subcommand("merge", "build a static interpolated model");
  ModelInputs merge_in;
  AddModelOptions(merge_cmd, merge_in);
  std::string merge_weights = "uniform", merge_strategy = "li", merge_out;
  merge_cmd->add_option("--weights", merge_weights, "weights file or 'uniform'");
  merge_cmd->add_option("--strategy", merge_strategy)->check(CLI::IsMember({"li", "cm", "bi"}));
  merge_cmd->add_option("--out", merge_out)->required();

  // prune
  auto *prune_cmd = app.add_subcommand("prune", "relative-entropy pruning");
  std::string prune_lm, prune_out;
  double prune_threshold = 0.0;
  prune_cmd->add_option("--lm", prune_lm)->required()->check(CLI::ExistingFile);
  prune_cmd->add_option("--prune-threshold", prune_threshold)->required()->check(
      CLI::NonNegativeNumber);
  prune_cmd->add_option("--out", prune_out)->required();

  // ppl
  auto *ppl_cmd = app.add_subcommand("ppl", "perplexity of a model or a mixture");
  ModelInputs ppl_in;
  AddModelOptions(ppl_cmd, ppl_in);
  std::string ppl_text, ppl_weights, ppl_strategy;
  bool ppl_gap = false;
  ppl_cmd->add_option("text", ppl_text)->required()->check(CLI::ExistingFile);
  ppl_cmd->add_option("--weights", ppl_weights, "weights file or 'uniform'");
  ppl_cmd->add_option("--strategy", ppl_strategy)->check(CLI::IsMember({"li", "cm", "bi"}));
  ppl_cmd->add_flag("--gap", ppl_gap, "also report the merged model and the gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  if (*vocab_cmd) {
    std::vector<std::ifstream> files;
    std::vector<std::istream *> streams;
    for (auto &p : vocab_corpora) files.push_back(OpenInput(p));
    for (auto &f : files) streams.push_back(&f);
    Vocabulary v = BuildVocab(streams, min_count);
    AtomicWrite(vocab_out, [&](std::ostream &out) { v.Write(out); });
    std::cout << "vocab_size\t" << v.size() << '\n';
  } else if (*count_cmd) {
    auto v = LoadVocab(count_vocab);
    auto in = OpenInput(count_corpus);
    NgramCounts t = CountNgrams(in, v, count_order);
    t.set_domain(Stem(count_corpus));
    AtomicWrite(count_out, [&](std::ostream &out) { t.Write(out); });
    std::cout << "total_words\t" << t.total_words() << '\n';
  } else if (*train_cmd) {
    auto th = ParseThresholds(train_thresholds, train_order);
    VocabPtr v;
    if (!train_vocab.empty()) {
      v = LoadVocab(train_vocab);
    } else {
      auto in = OpenInput(train_corpus);
      v = std::make_shared<const Vocabulary>(BuildVocab(in, train_min_count));
    }
    auto in = OpenInput(train_corpus);
    NgramCounts t = CountNgrams(in, v, train_order);
    t.set_domain(Stem(train_corpus));
    BackoffLm lm = EstimateGoodTuring(t, th);
    if (!train_counts_out.empty())
      AtomicWrite(train_counts_out, [&](std::ostream &out) { t.Write(out); });
    WriteArpaFile(lm, train_out);
    for (int k = 1; k <= lm.order(); ++k)
      std::cout << "ngrams_" << k << '\t' << lm.num_ngrams(k) << '\n';
  } else if (*fit_cmd) {
    ComponentSet comps = LoadComponents(fit_in);
    Strategy s = ParseStrategy(fit_strategy);
    RequireCounts(s, comps);
    EventList valid = LoadEvents(fit_valid, comps.vocab(), comps.order());
    FitOptions opts;
    opts.restarts = fit_restarts;
    opts.seed = fit_seed;
    opts.tol = fit_tol;
    opts.max_iterations = fit_max_iter;
    if (!fit_init.empty()) opts.init = LoadWeights(fit_init, comps);
    std::ostringstream trace;
    if (!fit_trace.empty()) {
      int current = -1;
      opts.trace = [&trace, current](int r, int it, double nll, double g) mutable {
        if (r != current) {
          trace << "# restart " << r << '\n';
          current = r;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%d\t%.10f\t%.3e\n", it, nll, g);
        trace << buf;
      };
    }
    FitResult fit = FitWeights(s, comps, valid, opts);
    auto names = comps.names();
    AtomicWrite(fit_out, [&](std::ostream &out) { WriteWeights(out, names, fit.lambda); });
    if (!fit_trace.empty())
      AtomicWrite(fit_trace, [&](std::ostream &out) { out << trace.str(); });
    EvalReport r = Perplexity(DynamicScorer(s, fit.lambda, comps), valid);
    PrintReport(r, "valid_");
    std::cout << "iterations\t" << fit.iterations << '\n'
              << "restarts\t" << fit.restarts_used << '\n'
              << "converged\t" << (fit.converged ? 1 : 0) << '\n';
  } else if (*merge_cmd) {
    ComponentSet comps = LoadComponents(merge_in);
    Strategy s = ParseStrategy(merge_strategy);
    RequireCounts(s, comps);
    WeightVector lam = LoadWeights(merge_weights, comps);
    MergedLm m = MergeStatic(s, lam, comps);
    WriteArpaFile(m.lm, merge_out);
    for (int k = 1; k <= m.lm.order(); ++k)
      std::cout << "ngrams_" << k << '\t' << m.lm.num_ngrams(k) << '\n';
    std::cout << "saturated_histories\t" << m.stats.saturated_histories << '\n';
  } else if (*prune_cmd) {
    BackoffLm lm = ReadArpaFile(prune_lm);
    PruneStats st;
    BackoffLm out = EntropyPrune(lm, prune_threshold, &st);
    WriteArpaFile(out, prune_out);
    for (std::size_t k = 0; k < st.before.size(); ++k)
      std::cout << "ngrams_" << k + 1 << '\t' << st.before[k] << '\t' << st.after[k] << '\n';
    std::cout << "pruned_direct\t" << st.pruned_direct << '\n'
              << "pruned_cascade\t" << st.pruned_cascade << '\n';
  } else if (*ppl_cmd) {
    ComponentSet comps = LoadComponents(ppl_in);
    EventList events = LoadEvents(ppl_text, comps.vocab(), comps.order());
    const bool mixture =
        comps.size() > 1 || !ppl_strategy.empty() || !ppl_weights.empty() || ppl_gap;
    if (!mixture) {
      PrintReport(Perplexity(LmScorer(*comps[0].lm), events));
      return 0;
    }
    Strategy s = ParseStrategy(ppl_strategy.empty() ? "li" : ppl_strategy);
    RequireCounts(s, comps);
    WeightVector lam = LoadWeights(ppl_weights, comps);
    if (!ppl_gap) {
      PrintReport(Perplexity(DynamicScorer(s, lam, comps), events));
      return 0;
    }
    GapReport g = DynamicStaticGap(s, lam, comps, events);
    PrintReport(g.dynamic, "dynamic_");
    PrintReport(g.merged, "static_");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", g.dynamic.ppl - g.merged.ppl);
    std::cout << "uncovered_events\t" << g.uncovered_events << '\n'
              << "ppl_gap\t" << buf << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return Run(argc, argv);
  } catch (const std::exception &e) {
    std::cerr << "lmmix: error: " << e.what() << '\n';
    return 1;
  }
}
