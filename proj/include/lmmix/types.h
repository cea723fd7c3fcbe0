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
// Basic types and error classes shared by every lmmix module.

#ifndef LMMIX_TYPES_H_
#define LMMIX_TYPES_H_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lmmix {

using WordId = std::uint32_t;

inline constexpr WordId kNoWord = std::numeric_limits<WordId>::max();

// Largest supported model order.
inline constexpr int kMaxOrder = 8;

// log10 value stored for events that must never be predicted (the
// sentence-start marker) and for degenerate backoff weights.
inline constexpr double kLogProbFloor = -99.0;
inline constexpr double kProbFloor = 1e-99;

// Selects between the plain sequential kernels and their OpenMP versions.
// The serial path is the reference the parallel one is tested against.
enum class Parallelism { kSerial, kOpenMp };

// Bad argument or violated precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string &what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input that is well formed but unusable (e.g. an empty corpus).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lmmix

#endif  // LMMIX_TYPES_H_
