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

#ifndef SYNTHPRIV_NOISE_H_
#define SYNTHPRIV_NOISE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

// Level 2 mechanisms. Every random draw comes from a stream keyed by
// (seed, column index, row index), so results do not depend on the order in
// which cells are visited.

struct LaplaceMechanism {
  double epsilon = 1.0;
  double sensitivity = 1.0;
};

struct GaussianMechanism {
  double epsilon = 1.0;
  double delta = 1e-5;
  double sensitivity = 1.0;
};

// Independent uniform permutation of the column. Without an explicit seed
// the call seed is used.
struct SwapMechanism {
  std::optional<std::uint64_t> seed;
};

struct RandomizedResponseMechanism {
  double p_truth = 0.5;
  std::optional<std::uint64_t> seed;
};

using NoiseMechanism = std::variant<LaplaceMechanism, GaussianMechanism,
                                    SwapMechanism, RandomizedResponseMechanism>;

struct NoiseConfig {
  std::map<std::string, NoiseMechanism> columns;
  bool clamp_to_bounds = true;
};

// b = sensitivity / epsilon.
double LaplaceScale(const LaplaceMechanism& mechanism);

// sigma = sensitivity * sqrt(2 ln(1.25 / delta)) / epsilon.
double GaussianSigma(const GaussianMechanism& mechanism);

// Basic composition: sum of the Laplace and Gaussian epsilons. Swap and
// randomized response carry no epsilon here.
double TotalEpsilon(const NoiseConfig& config);

absl::Status ValidateNoiseConfig(const Schema& schema,
                                 const NoiseConfig& config);

// Applies the Laplace and Gaussian entries of `config`; other entries are
// ignored. Integer columns are rounded after noising, then (optionally)
// clamped to the schema bounds.
absl::StatusOr<Dataset> AddNoise(const Dataset& dataset,
                                 const NoiseConfig& config, std::uint64_t seed);

absl::StatusOr<Dataset> SwapColumns(const Dataset& dataset,
                                    const std::vector<std::string>& columns,
                                    std::uint64_t seed);

// Keeps each cell with probability p_truth, otherwise draws uniformly over
// all categories (possibly the same one). p_truth = 0 is accepted and gives
// a fully random column.
absl::StatusOr<Dataset> RandomizedResponse(const Dataset& dataset,
                                           const std::string& column,
                                           double p_truth, std::uint64_t seed);

// Every mechanism in `config`, in the order: numeric noise, swaps,
// randomized response.
absl::StatusOr<Dataset> ApplyNoiseConfig(const Dataset& dataset,
                                         const NoiseConfig& config,
                                         std::uint64_t seed);

}  // namespace synthpriv

#endif  // SYNTHPRIV_NOISE_H_
