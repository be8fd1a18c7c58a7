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

#ifndef SYNTHPRIV_NELDER_MEAD_H_
#define SYNTHPRIV_NELDER_MEAD_H_

#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace synthpriv {

struct Evaluation {
  std::vector<double> x;
  double value = 0.0;
};

struct NelderMeadOptions {
  // Hard cap on objective evaluations.
  int max_evaluations = 200;
  // Initial simplex edge along each axis, as a fraction of the box width.
  double initial_step = 0.1;
  // Stops early once the simplex values and vertices have collapsed.
  double value_tolerance = 1e-14;
  double step_tolerance = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> best;
  double best_value = 0.0;
  // Every evaluation in call order.
  std::vector<Evaluation> trace;
  bool converged = false;
};

// Nelder-Mead simplex with every trial point projected onto the box
// [lower, upper]. Fails if the budget cannot cover the initial simplex.
absl::StatusOr<NelderMeadResult> MinimizeNelderMead(
    const std::function<double(std::span<const double>)>& objective,
    std::span<const double> lower, std::span<const double> upper,
    std::span<const double> start, const NelderMeadOptions& options);

}  // namespace synthpriv

#endif  // SYNTHPRIV_NELDER_MEAD_H_
