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

#ifndef SYNTHPRIV_DISTANCE_H_
#define SYNTHPRIV_DISTANCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

// Rows projected onto the metric's columns, row-major. Numeric cells are
// pre-divided by their column range; categorical cells hold the code.
struct EncodedRows {
  std::size_t num_rows = 0;
  std::size_t width = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * width, width};
  }
};

// Non-identifier columns of `published` that must also appear, with a
// compatible kind, in `reference`. Fails with the first missing or
// mismatched column.
absl::StatusOr<std::vector<std::string>> SharedColumns(
    const Schema& published, const Schema& reference);

// Mixed-type distance: range-scaled absolute difference for numeric columns
// (range taken from the reference data, 1 if degenerate), 0/1 mismatch for
// categorical columns, averaged over columns.
class MixedMetric {
 public:
  static absl::StatusOr<MixedMetric> Create(const Dataset& reference,
                                            std::vector<std::string> columns);
  // Ranges taken over the union of all reference datasets.
  static absl::StatusOr<MixedMetric> Create(
      const std::vector<const Dataset*>& references,
      std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<double>& ranges() const { return ranges_; }

  absl::StatusOr<EncodedRows> Encode(const Dataset& dataset) const;

  double Distance(std::span<const double> a, std::span<const double> b) const;

 private:
  std::vector<std::string> columns_;
  std::vector<char> categorical_;
  std::vector<std::vector<std::string>> categories_;
  std::vector<double> ranges_;
};

// For each query row, the distance to its closest row in `pool` (pool must be
// non-empty).
std::vector<double> DistanceToClosest(const MixedMetric& metric,
                                      const EncodedRows& queries,
                                      const EncodedRows& pool);

// The k pool rows nearest to `query`, ordered by (distance, pool index).
std::vector<std::size_t> NearestNeighbors(const MixedMetric& metric,
                                          std::span<const double> query,
                                          const EncodedRows& pool,
                                          std::size_t k);

}  // namespace synthpriv

#endif  // SYNTHPRIV_DISTANCE_H_
