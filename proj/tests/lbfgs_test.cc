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

#include <cmath>

#include "doctest.h"
#include "lmmix/lbfgs.h"

using namespace lmmix;

TEST_CASE("quadratic bowl") {
  Objective f = [](std::span<const double> x, std::span<double> g) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double s = static_cast<double>(i + 1);
      v += s * (x[i] - 1.0) * (x[i] - 1.0);
      g[i] = 2.0 * s * (x[i] - 1.0);
    }
    return v;
  };
  LbfgsOptions opts;
  opts.gradient_tol = 1e-10;
  opts.relative_tol = 1e-16;
  auto r = MinimizeLbfgs(f, std::vector<double>(6, -3.0), opts);
  CHECK(r.converged);
  for (double v : r.x) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("rosenbrock") {
  Objective f = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  LbfgsOptions opts;
  opts.gradient_tol = 1e-9;
  opts.relative_tol = 1e-18;
  opts.max_iterations = 1000;
  int traced = 0;
  double last = INFINITY;
  bool monotone = true;
  auto r = MinimizeLbfgs(f, {-1.2, 1.0}, opts, [&](int, double v, double) {
    ++traced;
    monotone &= v <= last;
    last = v;
  });
  CHECK(r.converged);
  CHECK(monotone);
  CHECK(traced > 0);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("iteration cap") {
  Objective f = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  LbfgsOptions opts;
  opts.max_iterations = 3;
  opts.relative_tol = 0.0;
  opts.gradient_tol = 0.0;
  auto r = MinimizeLbfgs(f, {-1.2, 1.0}, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations <= 3);
  CHECK(r.f < 24.2);
}

TEST_CASE("empty problem") {
  Objective f = [](std::span<const double>, std::span<double>) { return 2.5; };
  auto r = MinimizeLbfgs(f, {});
  CHECK(r.converged);
  CHECK(r.f == 2.5);
}
