//
// Copyright 2026 The Synthpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "synthpriv/nelder_mead.h"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"

namespace synthpriv {
namespace {

TEST(NelderMeadTest, FindsQuadraticMinimum) {
  auto f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
  };
  const std::vector<double> lo = {-5, -5}, hi = {5, 5}, start = {0, 0};
  NelderMeadOptions options;
  options.max_evaluations = 400;
  SP_ASSERT_OK_AND_ASSIGN(NelderMeadResult r,
                          MinimizeNelderMead(f, lo, hi, start, options));
  EXPECT_NEAR(r.best[0], 1.0, 1e-4);
  EXPECT_NEAR(r.best[1], -2.0, 1e-4);
  EXPECT_LE(static_cast<int>(r.trace.size()), options.max_evaluations);
}

TEST(NelderMeadTest, StaysInsideBox) {
  // Unconstrained minimum at 10 lies outside the box [0, 3].
  auto f = [](std::span<const double> x) { return (x[0] - 10.0) * (x[0] - 10.0); };
  const std::vector<double> lo = {0}, hi = {3}, start = {1.5};
  SP_ASSERT_OK_AND_ASSIGN(
      NelderMeadResult r, MinimizeNelderMead(f, lo, hi, start, NelderMeadOptions{}));
  for (const Evaluation& e : r.trace) {
    EXPECT_GE(e.x[0], 0.0);
    EXPECT_LE(e.x[0], 3.0);
  }
  EXPECT_NEAR(r.best[0], 3.0, 1e-6);
}

TEST(NelderMeadTest, TraceIsDeterministicAndBestIsMinimum) {
  auto f = [](std::span<const double> x) {
    return std::fabs(x[0] - 0.3) + std::fabs(x[1] - 0.7) + 0.1 * x[2] * x[2];
  };
  const std::vector<double> lo = {0, 0, -1}, hi = {1, 1, 1}, start = {.5, .5, 0};
  NelderMeadOptions o;
  o.max_evaluations = 150;
  SP_ASSERT_OK_AND_ASSIGN(NelderMeadResult a, MinimizeNelderMead(f, lo, hi, start, o));
  SP_ASSERT_OK_AND_ASSIGN(NelderMeadResult b, MinimizeNelderMead(f, lo, hi, start, o));
  ASSERT_EQ(a.trace.size(), b.trace.size());
  double best = a.trace.front().value;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].x, b.trace[i].x);
    best = std::min(best, a.trace[i].value);
  }
  EXPECT_EQ(a.best_value, best);
  EXPECT_EQ(a.trace.front().x, start);
}

TEST(NelderMeadTest, BudgetBelowInitialSimplexIsAnError) {
  auto f = [](std::span<const double> x) { return x[0] + x[1]; };
  const std::vector<double> lo = {0, 0}, hi = {1, 1}, start = {.5, .5};
  NelderMeadOptions o;
  o.max_evaluations = 2;
  EXPECT_FALSE(MinimizeNelderMead(f, lo, hi, start, o).ok());
}

TEST(NelderMeadTest, RejectsInvertedBox) {
  auto f = [](std::span<const double> x) { return x[0]; };
  const std::vector<double> lo = {1}, hi = {0}, start = {0.5};
  EXPECT_FALSE(MinimizeNelderMead(f, lo, hi, start, NelderMeadOptions{}).ok());
}

}  // namespace
}  // namespace synthpriv
