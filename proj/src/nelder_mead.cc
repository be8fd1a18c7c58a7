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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace synthpriv {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

absl::StatusOr<NelderMeadResult> MinimizeNelderMead(
    const std::function<double(std::span<const double>)>& objective,
    std::span<const double> lower, std::span<const double> upper,
    std::span<const double> start, const NelderMeadOptions& options) {
  const std::size_t d = start.size();
  if (d == 0 || lower.size() != d || upper.size() != d) {
    return absl::InvalidArgumentError("dimension mismatch in Nelder-Mead");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(lower[i] < upper[i]) || !std::isfinite(lower[i]) ||
        !std::isfinite(upper[i])) {
      return absl::InvalidArgumentError("box bounds need finite lo < hi");
    }
  }
  if (options.max_evaluations < static_cast<int>(d) + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget ", options.max_evaluations,
                     " cannot cover an initial simplex of ", d + 1,
                     " points"));
  }

  NelderMeadResult result;
  auto project = [&](std::vector<double> x) {
    for (std::size_t i = 0; i < d; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  };
  auto evaluate = [&](const std::vector<double>& x) {
    const double value = objective(x);
    result.trace.push_back({x, value});
    if (result.trace.size() == 1 || value < result.best_value) {
      result.best = x;
      result.best_value = value;
    }
    return value;
  };
  auto budget_left = [&] {
    return static_cast<int>(result.trace.size()) < options.max_evaluations;
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double> values;
  simplex.push_back(project(std::vector<double>(start.begin(), start.end())));
  values.push_back(evaluate(simplex[0]));
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> vertex = simplex[0];
    const double step = options.initial_step * (upper[i] - lower[i]);
    vertex[i] = vertex[i] + step <= upper[i] ? vertex[i] + step
                                             : vertex[i] - step;
    vertex = project(std::move(vertex));
    simplex.push_back(vertex);
    values.push_back(evaluate(vertex));
  }

  std::vector<std::size_t> order(d + 1);
  while (budget_left()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return values[a] < values[b];
                     });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[d - 1];

    double spread = 0.0;
    double diameter = 0.0;
    for (std::size_t v = 0; v <= d; ++v) {
      spread = std::max(spread, std::fabs(values[v] - values[best]));
      for (std::size_t i = 0; i < d; ++i) {
        diameter = std::max(
            diameter, std::fabs(simplex[v][i] - simplex[best][i]) /
                          (upper[i] - lower[i]));
      }
    }
    if (spread <= options.value_tolerance &&
        diameter <= options.step_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t v = 0; v <= d; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(d);
    auto along = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
      }
      return project(std::move(x));
    };

    std::vector<double> reflected = along(-kReflect);
    const double f_reflected = evaluate(reflected);
    if (f_reflected < values[best]) {
      if (!budget_left()) {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
        break;
      }
      std::vector<double> expanded = along(-kReflect * kExpand);
      const double f_expanded = evaluate(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = f_reflected < values[worst];
    std::vector<double> contracted =
        outside ? along(-kReflect * kContract) : along(kContract);
    const double f_contracted = evaluate(contracted);
    if (outside ? f_contracted <= f_reflected : f_contracted < values[worst]) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 0; v <= d && budget_left(); ++v) {
      if (v == best) continue;
      for (std::size_t i = 0; i < d; ++i) {
        simplex[v][i] =
            simplex[best][i] + kShrink * (simplex[v][i] - simplex[best][i]);
      }
      simplex[v] = project(simplex[v]);
      values[v] = evaluate(simplex[v]);
    }
  }
  return result;
}

}  // namespace synthpriv
