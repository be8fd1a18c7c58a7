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

#include "synthpriv/kdtree.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "synthpriv/random.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

constexpr std::uint64_t kCountStream = 0xc0;
constexpr std::uint64_t kHistogramStream = 0x415;
constexpr std::uint64_t kSampleStream = 0x5a3;

struct PendingLeaf {
  std::vector<std::size_t> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  int node = 0;
};

// Recursive median splitter over the numeric columns of `data`.
class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::vector<std::size_t> source,
              const KdTreeOptions& options)
      : data_(data), source_(std::move(source)), options_(options) {}

  void Build(std::vector<std::size_t> rows, std::vector<double> lower,
             std::vector<double> upper, std::vector<KdNode>& nodes,
             std::vector<PendingLeaf>& leaves) const {
    nodes.push_back(KdNode{});
    Grow(0, 0, std::move(rows), std::move(lower), std::move(upper), nodes,
         leaves);
  }

 private:
  double Value(std::size_t row, std::size_t dim) const {
    return data_.numeric(row, source_[dim]);
  }

  void Grow(int node, int depth, std::vector<std::size_t> rows,
            std::vector<double> lower, std::vector<double> upper,
            std::vector<KdNode>& nodes,
            std::vector<PendingLeaf>& leaves) const {
    nodes[node].depth = depth;
    const std::size_t half = rows.size() / 2;
    int split_dim = -1;
    double widest = 0.0;
    if (depth + 1 < options_.max_depth && half >= options_.min_leaf) {
      for (std::size_t dim = 0; dim < source_.size(); ++dim) {
        double lo = Value(rows.front(), dim);
        double hi = lo;
        for (std::size_t r : rows) {
          lo = std::min(lo, Value(r, dim));
          hi = std::max(hi, Value(r, dim));
        }
        // Strict comparison keeps the lowest index on ties.
        if (hi - lo > widest) {
          widest = hi - lo;
          split_dim = static_cast<int>(dim);
        }
      }
    }
    if (split_dim < 0) {
      nodes[node].leaf = static_cast<int>(leaves.size());
      leaves.push_back(PendingLeaf{std::move(rows), std::move(lower),
                                   std::move(upper), node});
      return;
    }
    const auto dim = static_cast<std::size_t>(split_dim);
    std::stable_sort(rows.begin(), rows.end(),
                     [&](std::size_t a, std::size_t b) {
                       return Value(a, dim) < Value(b, dim);
                     });
    const double split =
        0.5 * (Value(rows[half - 1], dim) + Value(rows[half], dim));
    std::vector<std::size_t> left_rows(rows.begin(), rows.begin() + half);
    std::vector<std::size_t> right_rows(rows.begin() + half, rows.end());
    std::sort(left_rows.begin(), left_rows.end());
    std::sort(right_rows.begin(), right_rows.end());
    std::vector<double> left_upper = upper;
    left_upper[dim] = split;
    std::vector<double> right_lower = lower;
    right_lower[dim] = split;

    const int left = static_cast<int>(nodes.size());
    nodes.push_back(KdNode{});
    const int right = static_cast<int>(nodes.size());
    nodes.push_back(KdNode{});
    nodes[node].split_dim = split_dim;
    nodes[node].split_value = split;
    nodes[node].left = left;
    nodes[node].right = right;
    Grow(left, depth + 1, std::move(left_rows), std::move(lower),
         std::move(left_upper), nodes, leaves);
    Grow(right, depth + 1, std::move(right_rows), std::move(right_lower),
         std::move(upper), nodes, leaves);
  }

  const Dataset& data_;
  std::vector<std::size_t> source_;
  const KdTreeOptions& options_;
};

std::size_t PickWeighted(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  return last_positive;
}

}  // namespace

double KdTreeModel::leaf_noise_scale() const {
  if (std::isinf(epsilon)) return 0.0;
  return static_cast<double>(depth) / epsilon;
}

double KdTreeModel::total_count() const {
  double total = 0.0;
  for (const KdLeaf& leaf : leaves) total += leaf.noised_count;
  return total;
}

absl::StatusOr<KdTreeModel> FitKdTree(const Dataset& dataset,
                                      const KdTreeOptions& options) {
  if (options.min_leaf < 2) {
    return absl::InvalidArgumentError("min_leaf must be at least 2");
  }
  if (!(options.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (options.max_depth < 1) {
    return absl::InvalidArgumentError("max_depth must be at least 1");
  }
  if (options.min_leaf > dataset.num_rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("min_leaf ", options.min_leaf, " exceeds row count ",
                     dataset.num_rows()));
  }
  KdTreeModel model;
  model.epsilon = options.epsilon;
  model.max_depth = options.max_depth;
  model.min_leaf = options.min_leaf;
  std::vector<std::size_t> source;
  for (std::size_t c = 0; c < dataset.num_columns(); ++c) {
    const ColumnSpec& column = dataset.column(c);
    if (column.is_identifier()) continue;
    if (column.is_numeric()) {
      model.numeric_columns.push_back(model.schema.size());
      source.push_back(c);
    } else {
      model.categorical_columns.push_back(model.schema.size());
    }
    model.schema.push_back(column);
  }
  if (model.numeric_columns.empty()) {
    return absl::InvalidArgumentError("KD-tree needs a numeric column");
  }

  const std::size_t dims = source.size();
  std::vector<double> lower(dims), upper(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const std::vector<double> values = dataset.NumericColumn(source[d]);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    lower[d] = *lo;
    upper[d] = *hi;
  }
  std::vector<std::size_t> rows(dataset.num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});

  const TreeBuilder builder(dataset, source, options);
  std::vector<PendingLeaf> pending;
  builder.Build(std::move(rows), std::move(lower), std::move(upper),
                model.nodes, pending);

  int max_leaf_depth = 0;
  for (const PendingLeaf& leaf : pending) {
    max_leaf_depth = std::max(max_leaf_depth, model.nodes[leaf.node].depth);
  }
  model.depth = max_leaf_depth + 1;
  const double scale = model.leaf_noise_scale();

  // Map model categorical columns back to dataset columns.
  std::vector<std::size_t> categorical_source;
  for (std::size_t c = 0; c < dataset.num_columns(); ++c) {
    if (dataset.column(c).is_categorical()) categorical_source.push_back(c);
  }

  for (std::size_t l = 0; l < pending.size(); ++l) {
    const PendingLeaf& p = pending[l];
    KdLeaf leaf;
    leaf.lower = p.lower;
    leaf.upper = p.upper;
    double count = static_cast<double>(p.rows.size());
    if (scale > 0.0) {
      BitStream rng(MixSeed(options.seed, l, kCountStream));
      count += SampleLaplace(rng, scale);
    }
    leaf.noised_count = std::max(0.0, count);
    for (std::size_t j = 0; j < categorical_source.size(); ++j) {
      const std::size_t col = categorical_source[j];
      const std::size_t k = dataset.column(col).categories.size();
      std::vector<double> hist(k, 0.0);
      for (std::size_t r : p.rows) hist[dataset.code(r, col)] += 1.0;
      if (scale > 0.0) {
        for (std::size_t c = 0; c < k; ++c) {
          BitStream rng(MixSeed(options.seed, l, kHistogramStream,
                                MixSeed(j, c)));
          hist[c] = std::max(0.0, hist[c] + SampleLaplace(rng, scale));
        }
      }
      double total = 0.0;
      for (double h : hist) total += h;
      for (double& h : hist) {
        h = total > 0.0 ? h / total : 1.0 / static_cast<double>(k);
      }
      leaf.category_weights.push_back(std::move(hist));
    }
    model.leaves.push_back(std::move(leaf));
  }
  return model;
}

absl::Status ValidateKdTreeModel(const KdTreeModel& model) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(model.schema));
  if (model.numeric_columns.empty()) {
    return absl::InvalidArgumentError("KD-tree model without numeric columns");
  }
  if (model.leaves.empty() || model.nodes.empty()) {
    return absl::InvalidArgumentError("KD-tree model without leaves");
  }
  if (model.depth > model.max_depth) {
    return absl::InvalidArgumentError("KD-tree deeper than max_depth");
  }
  for (const KdLeaf& leaf : model.leaves) {
    if (leaf.lower.size() != model.numeric_columns.size() ||
        leaf.upper.size() != model.numeric_columns.size() ||
        leaf.category_weights.size() != model.categorical_columns.size()) {
      return absl::InvalidArgumentError("KD-tree leaf has wrong arity");
    }
    if (!(leaf.noised_count >= 0.0)) {
      return absl::InvalidArgumentError("negative leaf count");
    }
    for (std::size_t d = 0; d < leaf.lower.size(); ++d) {
      if (!(leaf.lower[d] <= leaf.upper[d])) {
        return absl::InvalidArgumentError("KD-tree leaf box is inverted");
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> SampleKdTree(const KdTreeModel& model, std::int64_t n,
                                     std::uint64_t seed) {
  if (n < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample size must be non-negative, got ", n));
  }
  SYNTHPRIV_RETURN_IF_ERROR(ValidateKdTreeModel(model));
  if (!(model.total_count() > 0.0)) {
    return absl::FailedPreconditionError("all KD-tree leaf counts are zero");
  }
  std::vector<double> weights;
  weights.reserve(model.leaves.size());
  for (const KdLeaf& leaf : model.leaves) weights.push_back(leaf.noised_count);

  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    BitStream rng(MixSeed(seed, static_cast<std::uint64_t>(i), kSampleStream));
    const KdLeaf& leaf = model.leaves[PickWeighted(weights, UniformOpen(rng))];
    Row row(model.schema.size());
    for (std::size_t d = 0; d < model.numeric_columns.size(); ++d) {
      const std::size_t col = model.numeric_columns[d];
      const double u = UniformOpen(rng);
      double v = leaf.lower[d] + u * (leaf.upper[d] - leaf.lower[d]);
      if (leaf.upper[d] == leaf.lower[d]) v = leaf.lower[d];
      if (model.schema[col].kind == ColumnKind::kInteger) v = std::round(v);
      row[col] = v;
    }
    for (std::size_t j = 0; j < model.categorical_columns.size(); ++j) {
      row[model.categorical_columns[j]] = static_cast<int>(
          PickWeighted(leaf.category_weights[j], UniformOpen(rng)));
    }
    rows.push_back(std::move(row));
  }
  return Dataset::Create(model.schema, std::move(rows), "level3-kdtree");
}

}  // namespace synthpriv
