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

#include "synthpriv/copula.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "synthpriv/random.h"
#include "synthpriv/statistics.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

constexpr std::size_t kMinFitRows = 10;
constexpr double kMinEigenvalue = 1e-9;
constexpr std::uint64_t kCopulaStream = 0xc0b1a;

Eigen::MatrixXd ToMatrix(std::span<const double> values, std::size_t d) {
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = values[i * d + j];
  }
  return m;
}

// Symmetric square root factor: V * diag(sqrt(max(lambda, 0))).
Eigen::MatrixXd Factor(const CopulaModel& model) {
  const std::size_t d = model.dimension();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      ToMatrix(model.correlation, d));
  Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal();
}

double InvertNumeric(const std::vector<double>& sorted, double u) {
  const double pos = u * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

int InvertCategorical(const std::vector<double>& frequencies, double u) {
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    if (frequencies[k] <= 0.0) continue;
    last_positive = static_cast<int>(k);
    cumulative += frequencies[k];
    if (u <= cumulative) return static_cast<int>(k);
  }
  return last_positive;
}

}  // namespace

std::vector<double> NormalScores(std::span<const double> values) {
  std::vector<double> ranks = MidRanks(values);
  const double denom = static_cast<double>(values.size()) + 1.0;
  for (double& r : ranks) r = NormalQuantile(r / denom);
  return ranks;
}

std::vector<double> RepairCorrelation(std::span<const double> matrix,
                                      std::size_t dimension,
                                      double* shrinkage) {
  const Eigen::MatrixXd base = ToMatrix(matrix, dimension);
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(dimension, dimension);
  Eigen::MatrixXd repaired = identity;
  double lambda = 1.0;
  for (int step = 0; step <= 100; ++step) {
    lambda = step / 100.0;
    const Eigen::MatrixXd candidate = lambda * identity + (1.0 - lambda) * base;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        candidate, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() >= kMinEigenvalue) {
      repaired = candidate;
      break;
    }
  }
  if (shrinkage != nullptr) *shrinkage = lambda;
  std::vector<double> out(dimension * dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    for (std::size_t j = 0; j < dimension; ++j) {
      out[i * dimension + j] = repaired(i, j);
    }
  }
  return out;
}

absl::Status ValidateCopulaModel(const CopulaModel& model) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(model.schema));
  const std::size_t d = model.dimension();
  if (d == 0) return absl::InvalidArgumentError("copula with no columns");
  if (model.marginals.size() != d || model.correlation.size() != d * d) {
    return absl::InvalidArgumentError("copula dimensions are inconsistent");
  }
  for (std::size_t c = 0; c < d; ++c) {
    const ColumnSpec& column = model.schema[c];
    const std::vector<double>& marginal = model.marginals[c];
    if (column.is_identifier()) {
      return absl::InvalidArgumentError("copula cannot model identifiers");
    }
    if (marginal.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty marginal for '", column.name, "'"));
    }
    if (column.is_categorical()) {
      if (marginal.size() != column.categories.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "frequency table size mismatch for '", column.name, "'"));
      }
      double sum = 0.0;
      for (double f : marginal) {
        if (f < 0.0) {
          return absl::InvalidArgumentError("negative category frequency");
        }
        sum += f;
      }
      if (std::fabs(sum - 1.0) > 1e-9) {
        return absl::InvalidArgumentError(absl::StrCat(
            "category frequencies of '", column.name, "' do not sum to 1"));
      }
    } else if (!std::is_sorted(marginal.begin(), marginal.end())) {
      return absl::InvalidArgumentError(
          absl::StrCat("marginal of '", column.name, "' is not sorted"));
    }
  }
  const Eigen::MatrixXd corr = ToMatrix(model.correlation, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (corr(i, i) != 1.0) {
      return absl::InvalidArgumentError("correlation diagonal must be 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (corr(i, j) != corr(j, i)) {
        return absl::InvalidArgumentError("correlation is not symmetric");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr,
                                                        Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-9) {
    return absl::InvalidArgumentError("correlation is not PSD");
  }
  return absl::OkStatus();
}

absl::StatusOr<CopulaModel> FitCopula(const Dataset& dataset) {
  if (dataset.num_rows() < kMinFitRows) {
    return absl::InvalidArgumentError(
        absl::StrCat("copula fit needs at least ", kMinFitRows,
                     " rows, got ", dataset.num_rows()));
  }
  CopulaModel model;
  std::vector<std::vector<double>> scores;
  std::vector<bool> constant;
  for (std::size_t c = 0; c < dataset.num_columns(); ++c) {
    const ColumnSpec& column = dataset.column(c);
    if (column.is_identifier()) continue;
    std::vector<double> values;
    if (column.is_categorical()) {
      const std::vector<int> codes = dataset.CodeColumn(c);
      values.assign(codes.begin(), codes.end());
      model.marginals.push_back(CategoryFrequencies(
          codes, static_cast<int>(column.categories.size())));
    } else {
      values = dataset.NumericColumn(c);
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      model.marginals.push_back(std::move(sorted));
    }
    const bool is_constant =
        std::all_of(values.begin(), values.end(),
                    [&](double v) { return v == values.front(); });
    if (is_constant) {
      model.warnings.push_back(absl::StrCat(
          "column '", column.name,
          "' is constant; its latent correlations are set to 0"));
    }
    constant.push_back(is_constant);
    scores.push_back(NormalScores(values));
    model.schema.push_back(column);
  }
  const std::size_t d = model.schema.size();
  if (d == 0) {
    return absl::InvalidArgumentError(
        "copula fit needs at least one non-identifier column");
  }
  std::vector<double> corr(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    corr[i * d + i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double r = (constant[i] || constant[j])
                           ? 0.0
                           : PearsonCorrelation(scores[i], scores[j]);
      corr[i * d + j] = r;
      corr[j * d + i] = r;
    }
  }
  model.correlation = RepairCorrelation(corr, d, &model.shrinkage);
  // Shrinkage toward I keeps the diagonal at exactly 1 only up to rounding.
  for (std::size_t i = 0; i < d; ++i) model.correlation[i * d + i] = 1.0;
  return model;
}

absl::StatusOr<Dataset> SampleCopula(const CopulaModel& model, std::int64_t n,
                                     std::uint64_t seed) {
  if (n < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample size must be non-negative, got ", n));
  }
  SYNTHPRIV_RETURN_IF_ERROR(ValidateCopulaModel(model));
  const std::size_t d = model.dimension();
  const Eigen::MatrixXd factor = Factor(model);
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXd z(d);
  for (std::int64_t i = 0; i < n; ++i) {
    BitStream rng(MixSeed(seed, static_cast<std::uint64_t>(i), kCopulaStream));
    for (std::size_t j = 0; j < d; ++j) z(j) = SampleStandardNormal(rng);
    const Eigen::VectorXd latent = factor * z;
    Row row;
    row.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      const ColumnSpec& column = model.schema[j];
      const double u = NormalCdf(latent(j));
      if (column.is_categorical()) {
        row.emplace_back(InvertCategorical(model.marginals[j], u));
      } else {
        double v = InvertNumeric(model.marginals[j], u);
        if (column.kind == ColumnKind::kInteger) v = std::round(v);
        row.emplace_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset::Create(model.schema, std::move(rows), "level3-copula");
}

}  // namespace synthpriv
