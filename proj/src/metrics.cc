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

#include "synthpriv/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "synthpriv/distance.h"
#include "synthpriv/statistics.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

absl::StatusOr<std::size_t> LabelColumn(const Dataset& dataset,
                                        const std::string& label,
                                        const std::string& role) {
  auto idx = dataset.ColumnIndex(label);
  if (!idx.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat(role, " lacks label column '", label, "'"));
  }
  if (!dataset.column(*idx).is_categorical()) {
    return absl::InvalidArgumentError(
        absl::StrCat("label column '", label, "' must be categorical"));
  }
  return *idx;
}

// Concatenates two datasets with matching column kinds. Bounds are dropped
// (a simulator may legitimately exceed the real data's declared range) and
// row ids renumbered, since the union only serves as a training pool.
absl::StatusOr<Dataset> Union(const Dataset& a, const Dataset& b) {
  Schema schema = a.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const ColumnSpec& other = b.column(c);
    if (schema[c].is_numeric() != other.is_numeric() ||
        schema[c].categories != other.categories) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", schema[c].name,
          "' differs between real and synthetic data"));
    }
    schema[c].bounds.reset();
  }
  std::vector<Row> rows = a.rows();
  rows.insert(rows.end(), b.rows().begin(), b.rows().end());
  return Dataset::Create(std::move(schema), std::move(rows), "augmented");
}

}  // namespace

absl::StatusOr<FidelityReport> Fidelity(const Dataset& real,
                                        const Dataset& synthetic,
                                        const FidelityWeights& weights) {
  if (!(weights.ks >= 0.0 && weights.tv >= 0.0 && weights.correlation >= 0.0) ||
      weights.ks + weights.tv + weights.correlation <= 0.0) {
    return absl::InvalidArgumentError(
        "fidelity weights must be non-negative and not all zero");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(std::vector<std::string> columns,
                             SharedColumns(synthetic.schema(), real.schema()));
  FidelityReport report;
  report.weights = weights;
  std::vector<std::vector<double>> real_numeric, synth_numeric;
  for (const std::string& name : columns) {
    const std::size_t r = *real.ColumnIndex(name);
    const std::size_t s = *synthetic.ColumnIndex(name);
    const ColumnSpec& spec = real.column(r);
    if (spec.is_numeric()) {
      real_numeric.push_back(real.NumericColumn(r));
      synth_numeric.push_back(synthetic.NumericColumn(s));
      report.ks.emplace_back(name,
                             KsStatistic(real_numeric.back(),
                                         synth_numeric.back()));
    } else {
      const int k = static_cast<int>(spec.categories.size());
      const std::vector<int> real_codes = real.CodeColumn(r);
      const std::vector<int> synth_codes = synthetic.CodeColumn(s);
      report.tv.emplace_back(
          name, TotalVariation(CategoryFrequencies(real_codes, k),
                               CategoryFrequencies(synth_codes, k)));
    }
  }
  const std::size_t k = real_numeric.size();
  if (k >= 2) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        const double d =
            PearsonCorrelation(real_numeric[i], real_numeric[j]) -
            PearsonCorrelation(synth_numeric[i], synth_numeric[j]);
        sum += d * d;
      }
    }
    report.correlation_distance = std::sqrt(sum);
    report.correlation_normalized =
        *report.correlation_distance /
        (2.0 * std::sqrt(static_cast<double>(k * (k - 1))));
  }

  double numerator = 0.0;
  double denominator = 0.0;
  auto add = [&](double weight, double value) {
    numerator += weight * value;
    denominator += weight;
  };
  auto mean_of = [](const std::vector<std::pair<std::string, double>>& v) {
    double total = 0.0;
    for (const auto& [name, value] : v) total += value;
    return total / static_cast<double>(v.size());
  };
  if (!report.ks.empty()) add(weights.ks, mean_of(report.ks));
  if (!report.tv.empty()) add(weights.tv, mean_of(report.tv));
  if (report.correlation_normalized.has_value()) {
    add(weights.correlation, *report.correlation_normalized);
  }
  report.composite = denominator > 0.0 ? numerator / denominator : 0.0;
  return report;
}

absl::StatusOr<double> KnnAccuracy(const Dataset& train, const Dataset& test,
                                   const UtilityTask& task, std::size_t k,
                                   const Dataset& range_reference) {
  if (k == 0) return absl::InvalidArgumentError("k must be positive");
  if (k > train.num_rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "k = ", k, " exceeds the training set size ", train.num_rows()));
  }
  if (test.num_rows() == 0) {
    return absl::InvalidArgumentError("test set is empty");
  }
  if (task.features.empty()) {
    return absl::InvalidArgumentError("utility task has no features");
  }
  if (std::find(task.features.begin(), task.features.end(), task.label) !=
      task.features.end()) {
    return absl::InvalidArgumentError("label column listed as a feature");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(std::size_t train_label,
                             LabelColumn(train, task.label, "training data"));
  SYNTHPRIV_ASSIGN_OR_RETURN(std::size_t test_label,
                             LabelColumn(test, task.label, "test data"));
  const std::vector<std::string>& categories =
      train.column(train_label).categories;
  if (categories != test.column(test_label).categories) {
    return absl::InvalidArgumentError(
        "label categories differ between training and test data");
  }
  SYNTHPRIV_ASSIGN_OR_RETURN(MixedMetric metric,
                             MixedMetric::Create(range_reference, task.features));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows pool, metric.Encode(train));
  SYNTHPRIV_ASSIGN_OR_RETURN(EncodedRows queries, metric.Encode(test));
  const std::vector<int> train_codes = train.CodeColumn(train_label);
  const std::vector<int> test_codes = test.CodeColumn(test_label);
  std::size_t correct = 0;
  std::vector<int> votes(categories.size());
  for (std::size_t q = 0; q < queries.num_rows; ++q) {
    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t n : NearestNeighbors(metric, queries.row(q), pool, k)) {
      ++votes[static_cast<std::size_t>(train_codes[n])];
    }
    // max_element returns the first maximum, which is the lowest code.
    const int predicted =
        static_cast<int>(std::max_element(votes.begin(), votes.end()) -
                         votes.begin());
    if (predicted == test_codes[q]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.num_rows());
}

absl::StatusOr<UtilityReport> UtilityTstr(const Dataset& real_train,
                                          const Dataset& synthetic,
                                          const Dataset& real_test,
                                          const UtilityTask& task,
                                          std::size_t k) {
  const std::unordered_set<RowId> test_ids(real_test.row_ids().begin(),
                                           real_test.row_ids().end());
  for (RowId id : real_train.row_ids()) {
    if (test_ids.contains(id)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row id ", id, " appears in both the training and test data"));
    }
  }
  UtilityReport report;
  report.task = task;
  report.k = k;
  SYNTHPRIV_ASSIGN_OR_RETURN(
      report.acc_real_baseline,
      KnnAccuracy(real_train, real_test, task, k, real_train));
  SYNTHPRIV_ASSIGN_OR_RETURN(
      report.acc_synthetic,
      KnnAccuracy(synthetic, real_test, task, k, real_train));
  // Only the task columns take part, so the union is formed on them.
  std::vector<std::string> columns = task.features;
  columns.push_back(task.label);
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset real_part,
                             ProjectColumns(real_train, columns));
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset synth_part,
                             ProjectColumns(synthetic, columns));
  SYNTHPRIV_ASSIGN_OR_RETURN(Dataset augmented, Union(real_part, synth_part));
  SYNTHPRIV_ASSIGN_OR_RETURN(
      report.acc_augmented,
      KnnAccuracy(augmented, real_test, task, k, real_train));
  report.uplift = report.acc_augmented - report.acc_real_baseline;
  return report;
}

}  // namespace synthpriv
