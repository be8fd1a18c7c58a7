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

#include "synthpriv/distance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"

namespace synthpriv {
namespace {

bool CompatibleKinds(const ColumnSpec& a, const ColumnSpec& b) {
  if (a.is_numeric() && b.is_numeric()) return true;
  return a.is_categorical() && b.is_categorical() &&
         a.categories == b.categories;
}

}  // namespace

absl::StatusOr<std::vector<std::string>> SharedColumns(
    const Schema& published, const Schema& reference) {
  std::vector<std::string> shared;
  for (const ColumnSpec& column : published) {
    if (column.is_identifier()) continue;
    auto idx = FindColumn(reference, column.name);
    if (!idx.has_value()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: column '", column.name, "' missing"));
    }
    if (!CompatibleKinds(column, reference[*idx])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: column '", column.name, "' has kind ",
          ColumnKindName(column.kind), " vs ",
          ColumnKindName(reference[*idx].kind)));
    }
    shared.push_back(column.name);
  }
  if (shared.empty()) {
    return absl::InvalidArgumentError("no shared non-identifier columns");
  }
  return shared;
}

absl::StatusOr<MixedMetric> MixedMetric::Create(
    const Dataset& reference, std::vector<std::string> columns) {
  return Create(std::vector<const Dataset*>{&reference}, std::move(columns));
}

absl::StatusOr<MixedMetric> MixedMetric::Create(
    const std::vector<const Dataset*>& references,
    std::vector<std::string> columns) {
  if (references.empty()) {
    return absl::InvalidArgumentError("metric needs reference data");
  }
  MixedMetric metric;
  for (const std::string& name : columns) {
    const ColumnSpec* spec = nullptr;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Dataset* reference : references) {
      auto idx = reference->ColumnIndex(name);
      if (!idx.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrCat("metric column '", name, "' not in reference data"));
      }
      spec = &reference->column(*idx);
      if (spec->is_identifier()) {
        return absl::InvalidArgumentError(
            absl::StrCat("metric column '", name, "' is an identifier"));
      }
      if (!spec->is_numeric()) continue;
      for (std::size_t r = 0; r < reference->num_rows(); ++r) {
        lo = std::min(lo, reference->numeric(r, *idx));
        hi = std::max(hi, reference->numeric(r, *idx));
      }
    }
    metric.categorical_.push_back(spec->is_categorical());
    metric.categories_.push_back(spec->categories);
    metric.ranges_.push_back(spec->is_numeric() && hi - lo > 0.0 ? hi - lo
                                                                 : 1.0);
  }
  metric.columns_ = std::move(columns);
  return metric;
}

absl::StatusOr<EncodedRows> MixedMetric::Encode(const Dataset& dataset) const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    auto c = dataset.ColumnIndex(columns_[j]);
    if (!c.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("schema mismatch: column '", columns_[j], "' missing"));
    }
    const ColumnSpec& spec = dataset.column(*c);
    const bool ok = categorical_[j]
                        ? spec.is_categorical() && spec.categories == categories_[j]
                        : spec.is_numeric();
    if (!ok) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema mismatch: column '", columns_[j], "' has incompatible kind"));
    }
    idx.push_back(*c);
  }
  EncodedRows out;
  out.num_rows = dataset.num_rows();
  out.width = columns_.size();
  out.values.reserve(out.num_rows * out.width);
  for (std::size_t r = 0; r < dataset.num_rows(); ++r) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (categorical_[j]) {
        out.values.push_back(static_cast<double>(dataset.code(r, idx[j])));
      } else {
        out.values.push_back(dataset.numeric(r, idx[j]) / ranges_[j]);
      }
    }
  }
  return out;
}

double MixedMetric::Distance(std::span<const double> a,
                             std::span<const double> b) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (categorical_[j]) {
      sum += a[j] == b[j] ? 0.0 : 1.0;
    } else {
      sum += std::fabs(a[j] - b[j]);
    }
  }
  return a.empty() ? 0.0 : sum / static_cast<double>(a.size());
}

std::vector<double> DistanceToClosest(const MixedMetric& metric,
                                      const EncodedRows& queries,
                                      const EncodedRows& pool) {
  std::vector<double> out(queries.num_rows,
                          std::numeric_limits<double>::infinity());
  for (std::size_t q = 0; q < queries.num_rows; ++q) {
    const auto query = queries.row(q);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < pool.num_rows; ++p) {
      best = std::min(best, metric.Distance(query, pool.row(p)));
      if (best == 0.0) break;
    }
    out[q] = best;
  }
  return out;
}

std::vector<std::size_t> NearestNeighbors(const MixedMetric& metric,
                                          std::span<const double> query,
                                          const EncodedRows& pool,
                                          std::size_t k) {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(pool.num_rows);
  for (std::size_t p = 0; p < pool.num_rows; ++p) {
    scored.emplace_back(metric.Distance(query, pool.row(p)), p);
  }
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace synthpriv
