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

#include "synthpriv/noise.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "synthpriv/random.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

constexpr std::uint64_t kSwapStream = 0x5a9;
constexpr std::uint64_t kResponseStream = 0x7e5;

absl::Status ValidateMechanism(const ColumnSpec& column,
                               const NoiseMechanism& mechanism) {
  const std::string where = absl::StrCat("column '", column.name, "'");
  if (const auto* laplace = std::get_if<LaplaceMechanism>(&mechanism)) {
    if (!column.is_numeric()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": Laplace needs a numeric column"));
    }
    if (!(laplace->epsilon > 0.0) || !(laplace->sensitivity > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": epsilon and sensitivity must be positive"));
    }
  } else if (const auto* gaussian =
                 std::get_if<GaussianMechanism>(&mechanism)) {
    if (!column.is_numeric()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": Gaussian needs a numeric column"));
    }
    if (!(gaussian->epsilon > 0.0) || !(gaussian->sensitivity > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": epsilon and sensitivity must be positive"));
    }
    if (!(gaussian->delta > 0.0 && gaussian->delta < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": delta must lie in (0, 1)"));
    }
  } else if (const auto* rr =
                 std::get_if<RandomizedResponseMechanism>(&mechanism)) {
    if (!column.is_categorical()) {
      return absl::InvalidArgumentError(absl::StrCat(
          where, ": randomized response needs a categorical column"));
    }
    if (!(rr->p_truth >= 0.0 && rr->p_truth <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": p_truth must lie in [0, 1]"));
    }
  }
  return absl::OkStatus();
}

double Finish(const ColumnSpec& column, double value, bool clamp) {
  if (column.kind == ColumnKind::kInteger) value = std::round(value);
  if (clamp && column.bounds.has_value()) {
    double lo = column.bounds->min;
    double hi = column.bounds->max;
    if (column.kind == ColumnKind::kInteger) {
      lo = std::ceil(lo);
      hi = std::floor(hi);
    }
    value = std::clamp(value, lo, hi);
  }
  return value;
}

}  // namespace

double LaplaceScale(const LaplaceMechanism& mechanism) {
  return mechanism.sensitivity / mechanism.epsilon;
}

double GaussianSigma(const GaussianMechanism& mechanism) {
  return mechanism.sensitivity *
         std::sqrt(2.0 * std::log(1.25 / mechanism.delta)) / mechanism.epsilon;
}

double TotalEpsilon(const NoiseConfig& config) {
  double total = 0.0;
  for (const auto& [name, mechanism] : config.columns) {
    if (const auto* laplace = std::get_if<LaplaceMechanism>(&mechanism)) {
      total += laplace->epsilon;
    } else if (const auto* gaussian =
                   std::get_if<GaussianMechanism>(&mechanism)) {
      total += gaussian->epsilon;
    }
  }
  return total;
}

absl::Status ValidateNoiseConfig(const Schema& schema,
                                 const NoiseConfig& config) {
  for (const auto& [name, mechanism] : config.columns) {
    auto idx = FindColumn(schema, name);
    if (!idx.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("noise config names unknown column '", name, "'"));
    }
    SYNTHPRIV_RETURN_IF_ERROR(ValidateMechanism(schema[*idx], mechanism));
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> AddNoise(const Dataset& dataset,
                                 const NoiseConfig& config,
                                 std::uint64_t seed) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateNoiseConfig(dataset.schema(), config));
  std::vector<Row> rows = dataset.rows();
  for (const auto& [name, mechanism] : config.columns) {
    const std::size_t col = *dataset.ColumnIndex(name);
    const ColumnSpec& spec = dataset.column(col);
    const auto* laplace = std::get_if<LaplaceMechanism>(&mechanism);
    const auto* gaussian = std::get_if<GaussianMechanism>(&mechanism);
    if (laplace == nullptr && gaussian == nullptr) continue;
    const double scale =
        laplace != nullptr ? LaplaceScale(*laplace) : GaussianSigma(*gaussian);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      BitStream rng = CellStream(seed, col, r);
      const double noise = laplace != nullptr
                               ? SampleLaplace(rng, scale)
                               : scale * SampleStandardNormal(rng);
      double& cell = std::get<double>(rows[r][col]);
      cell = Finish(spec, cell + noise, config.clamp_to_bounds);
    }
  }
  auto out = Dataset::Create(dataset.schema(), std::move(rows),
                             dataset.row_ids(), "level2");
  if (!out.ok()) {
    return Annotate(out.status(),
                    "noised data violates the schema (enable clamp_to_bounds)");
  }
  return out;
}

absl::StatusOr<Dataset> SwapColumns(const Dataset& dataset,
                                    const std::vector<std::string>& columns,
                                    std::uint64_t seed) {
  std::vector<Row> rows = dataset.rows();
  const std::size_t n = rows.size();
  for (const std::string& name : columns) {
    auto idx = dataset.ColumnIndex(name);
    if (!idx.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("swap names unknown column '", name, "'"));
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    BitStream rng(MixSeed(seed, *idx, kSwapStream));
    for (std::size_t i = n; i > 1; --i) {
      std::swap(perm[i - 1], perm[UniformIndex(rng, i)]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      rows[r][*idx] = dataset.rows()[perm[r]][*idx];
    }
  }
  return Dataset::Create(dataset.schema(), std::move(rows), dataset.row_ids(),
                         "level2");
}

absl::StatusOr<Dataset> RandomizedResponse(const Dataset& dataset,
                                           const std::string& column,
                                           double p_truth,
                                           std::uint64_t seed) {
  auto idx = dataset.ColumnIndex(column);
  if (!idx.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown column '", column, "'"));
  }
  SYNTHPRIV_RETURN_IF_ERROR(
      ValidateMechanism(dataset.column(*idx),
                        RandomizedResponseMechanism{p_truth, std::nullopt}));
  const std::uint64_t k = dataset.column(*idx).categories.size();
  std::vector<Row> rows = dataset.rows();
  const std::uint64_t stream_seed = MixSeed(seed, kResponseStream);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    BitStream rng = CellStream(stream_seed, *idx, r);
    if (UniformOpen(rng) < p_truth) continue;
    rows[r][*idx] = static_cast<int>(UniformIndex(rng, k));
  }
  return Dataset::Create(dataset.schema(), std::move(rows), dataset.row_ids(),
                         "level2");
}

absl::StatusOr<Dataset> ApplyNoiseConfig(const Dataset& dataset,
                                         const NoiseConfig& config,
                                         std::uint64_t seed) {
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset out, AddNoise(dataset, config, seed));
  for (const auto& [name, mechanism] : config.columns) {
    if (const auto* swap = std::get_if<SwapMechanism>(&mechanism)) {
      SYNTHPRIV_ASSIGN_OR_RETURN(
          out, SwapColumns(out, {name}, swap->seed.value_or(seed)));
    }
  }
  for (const auto& [name, mechanism] : config.columns) {
    if (const auto* rr = std::get_if<RandomizedResponseMechanism>(&mechanism)) {
      SYNTHPRIV_ASSIGN_OR_RETURN(
          out, RandomizedResponse(out, name, rr->p_truth,
                                  rr->seed.value_or(seed)));
    }
  }
  return out;
}

}  // namespace synthpriv
