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
// ARPA text format.
//
//   ## free-form comment lines (optional)
//   \data\ (header)
//   ngram 1=N1
//   ...
//   \1-grams:
//   logp<TAB>w<TAB>bow
//   ...
//   \end\ (trailer)
//
// Values are log10 with 6 fractional digits; sections go by increasing k,
// entries within a section by token ids.

#ifndef LMMIX_ARPA_H_
#define LMMIX_ARPA_H_

#include <iosfwd>
#include <string>

#include "lmmix/backoff_lm.h"

namespace lmmix {

void WriteArpa(const BackoffLm &lm, std::ostream &out);

// With a null `vocab` the vocabulary is built from the unigram section
// (markers first, then tokens in file order). Otherwise every token must
// already be in `vocab`. Throws ParseError with the offending line number.
BackoffLm ReadArpa(std::istream &in, VocabPtr vocab = nullptr);

// File helpers. Writing goes through a temporary file and a rename so a
// failed write never leaves a truncated model behind.
void WriteArpaFile(const BackoffLm &lm, const std::string &path);
BackoffLm ReadArpaFile(const std::string &path, VocabPtr vocab = nullptr);

}  // namespace lmmix

#endif  // LMMIX_ARPA_H_
