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

#ifndef SYNTHPRIV_METRICS_H_
#define SYNTHPRIV_METRICS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

struct FidelityWeights {
  double ks = 1.0;
  double tv = 1.0;
  double correlation = 1.0;
};

// Distances between a real and a synthetic dataset; 0 means identical.
struct FidelityReport {
  std::vector<std::pair<std::string, double>> ks;  // numeric columns
  std::vector<std::pair<std::string, double>> tv;  // categorical columns
  // Frobenius norm of the Pearson correlation difference over numeric
  // columns; absent with fewer than two numeric columns.
  std::optional<double> correlation_distance;
  // correlation_distance / (2 sqrt(k (k - 1))), which lies in [0, 1].
  std::optional<double> correlation_normalized;
  FidelityWeights weights;
  // Weighted mean of mean KS, mean TV and the normalized correlation
  // distance. Absent groups drop out and the remaining weights renormalize.
  double composite = 0.0;
};

// Compares the non-identifier columns of `synthetic` against `real`.
absl::StatusOr<FidelityReport> Fidelity(const Dataset& real,
                                        const Dataset& synthetic,
                                        const FidelityWeights& weights = {});

struct UtilityTask {
  std::string label;
  std::vector<std::string> features;
};

struct UtilityReport {
  UtilityTask task;
  std::size_t k = 5;
  double acc_real_baseline = 0.0;
  double acc_synthetic = 0.0;
  double acc_augmented = 0.0;
  double uplift = 0.0;  // acc_augmented - acc_real_baseline
};

// k-nearest-neighbour classification accuracy on `test`, trained on
// `train`, using the mixed metric with ranges from `range_reference`.
// Majority vote, ties to the lowest category code.
absl::StatusOr<double> KnnAccuracy(const Dataset& train, const Dataset& test,
                                   const UtilityTask& task, std::size_t k,
                                   const Dataset& range_reference);

// Train-on-synthetic-test-on-real. Three k-NN classifiers are trained on
// real_train, on synthetic, and on their union; each is scored on real_test.
absl::StatusOr<UtilityReport> UtilityTstr(const Dataset& real_train,
                                          const Dataset& synthetic,
                                          const Dataset& real_test,
                                          const UtilityTask& task,
                                          std::size_t k = 5);

}  // namespace synthpriv

#endif  // SYNTHPRIV_METRICS_H_
