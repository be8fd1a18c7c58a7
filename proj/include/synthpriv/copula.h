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

#ifndef SYNTHPRIV_COPULA_H_
#define SYNTHPRIV_COPULA_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

// Gaussian copula over the non-identifier columns of a dataset.
struct CopulaModel {
  Schema schema;
  // Numeric columns: the sorted training values. Categorical columns: the
  // relative frequency of each category code.
  std::vector<std::vector<double>> marginals;
  // Row-major d x d latent correlation, already repaired to be PSD.
  std::vector<double> correlation;
  // Weight on the identity used by the repair (0 when none was needed).
  double shrinkage = 0.0;
  std::vector<std::string> warnings;

  std::size_t dimension() const { return schema.size(); }
  double corr(std::size_t i, std::size_t j) const {
    return correlation[i * schema.size() + j];
  }
};

// Rank -> standard normal quantile of rank / (n + 1), midranks for ties.
std::vector<double> NormalScores(std::span<const double> values);

// Smallest lambda in {0, 0.01, ..., 1} for which
// lambda * I + (1 - lambda) * matrix has every eigenvalue >= 1e-9.
// Returns the repaired matrix and writes lambda to *shrinkage.
std::vector<double> RepairCorrelation(std::span<const double> matrix,
                                      std::size_t dimension,
                                      double* shrinkage);

absl::Status ValidateCopulaModel(const CopulaModel& model);

// Needs at least 10 rows and one non-identifier column. A constant column
// gets zero correlation with everything else and a warning.
absl::StatusOr<CopulaModel> FitCopula(const Dataset& dataset);

// Row i uses its own stream derived from (seed, i): the first m rows of an
// n-row sample equal an m-row sample with the same seed.
absl::StatusOr<Dataset> SampleCopula(const CopulaModel& model, std::int64_t n,
                                     std::uint64_t seed);

}  // namespace synthpriv

#endif  // SYNTHPRIV_COPULA_H_
