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
// Limited-memory BFGS with a strong-Wolfe line search.

#ifndef LMMIX_LBFGS_H_
#define LMMIX_LBFGS_H_

#include <functional>
#include <span>
#include <vector>

namespace lmmix {

// Returns f(x) and writes the gradient into grad.
using Objective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 500;
  // Converged when max |grad_i| < gradient_tol ...
  double gradient_tol = 1e-7;
  // ... or |f_prev - f| <= relative_tol * max(1, |f|).
  double relative_tol = 1e-7;
  int max_line_search = 40;
};

struct LbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  double gradient_norm = 0.0;  // max-norm at x
  int iterations = 0;
  bool converged = false;
};

// `trace`, if set, is called after every iteration with
// (iteration, f, gradient max-norm).
LbfgsResult MinimizeLbfgs(const Objective &objective, std::vector<double> x0,
                          const LbfgsOptions &options = {},
                          const std::function<void(int, double, double)> &trace = {});

}  // namespace lmmix

#endif  // LMMIX_LBFGS_H_
