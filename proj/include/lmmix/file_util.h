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
// Small file helpers.

#ifndef LMMIX_FILE_UTIL_H_
#define LMMIX_FILE_UTIL_H_

#include <fstream>
#include <functional>
#include <ostream>
#include <string>

namespace lmmix {

// Opens `path` for reading; throws std::runtime_error when it cannot.
std::ifstream OpenInput(const std::string &path);

// Runs `write` against a temporary sibling of `path` and renames it into
// place on success. On failure the temporary is removed and the error
// rethrown.
void AtomicWrite(const std::string &path,
                 const std::function<void(std::ostream &)> &write);

}  // namespace lmmix

#endif  // LMMIX_FILE_UTIL_H_
