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

#ifndef SYNTHPRIV_KDTREE_H_
#define SYNTHPRIV_KDTREE_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

inline constexpr char kKdSplitRule[] =
    "widest-spread column, median split, ties to lowest column index";
inline constexpr char kKdVariantNote[] = "KD-tree (this toolkit's variant)";

struct KdNode {
  // Internal nodes: split_dim indexes KdTreeModel::numeric_columns. Leaves
  // have split_dim = -1 and leaf set.
  int split_dim = -1;
  double split_value = 0.0;
  int left = -1;
  int right = -1;
  int leaf = -1;
  int depth = 0;
};

struct KdLeaf {
  // Per numeric column, inclusive box [lower, upper].
  std::vector<double> lower;
  std::vector<double> upper;
  double noised_count = 0.0;
  // Per categorical column, normalized noised histogram.
  std::vector<std::vector<double>> category_weights;
};

struct KdTreeModel {
  Schema schema;
  std::vector<std::size_t> numeric_columns;
  std::vector<std::size_t> categorical_columns;
  std::vector<KdNode> nodes;  // nodes[0] is the root
  std::vector<KdLeaf> leaves;
  double epsilon = std::numeric_limits<double>::infinity();
  // Number of levels, a root-only tree has depth 1.
  int depth = 1;
  int max_depth = 12;
  std::size_t min_leaf = 2;
  std::string split_rule = kKdSplitRule;

  // Laplace scale applied to every leaf count: depth / epsilon.
  double leaf_noise_scale() const;
  double total_count() const;
};

struct KdTreeOptions {
  std::size_t min_leaf = 20;
  // Infinity disables noise.
  double epsilon = std::numeric_limits<double>::infinity();
  // Maximum number of levels.
  int max_depth = 12;
  std::uint64_t seed = 0;
};

// Splits numeric columns only; categorical columns are modeled per leaf and
// identifier columns are not modeled.
absl::StatusOr<KdTreeModel> FitKdTree(const Dataset& dataset,
                                      const KdTreeOptions& options);

absl::Status ValidateKdTreeModel(const KdTreeModel& model);

// Row i uses its own stream derived from (seed, i).
absl::StatusOr<Dataset> SampleKdTree(const KdTreeModel& model, std::int64_t n,
                                     std::uint64_t seed);

}  // namespace synthpriv

#endif  // SYNTHPRIV_KDTREE_H_
