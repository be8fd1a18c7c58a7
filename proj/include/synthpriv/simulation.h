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

#ifndef SYNTHPRIV_SIMULATION_H_
#define SYNTHPRIV_SIMULATION_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"
#include "synthpriv/nelder_mead.h"

namespace synthpriv {

// Levels 5 and 6: rule-based tabular simulation. Nothing here takes a real
// dataset as input; calibration sees only aggregate target values.

struct UniformRule {
  double a = 0.0;
  double b = 1.0;
};

struct NormalRule {
  double mu = 0.0;
  double sigma = 1.0;
};

struct LogNormalRule {
  double mu = 0.0;
  double sigma = 1.0;
};

struct ExponentialRule {
  double lambda = 1.0;
};

// Weights over the column's categories, in category order.
struct CategoricalRule {
  std::vector<double> weights;
};

struct EquationTerm {
  enum class Kind {
    kLinear,           // coef * x
    kEquals,           // coef * [x == category]
    kGreater,          // coef * [x > threshold]
  };
  std::string column;
  double coef = 0.0;
  Kind kind = Kind::kLinear;
  std::string category;
  double threshold = 0.0;
};

// intercept + sum(terms) + noise_sigma * z over earlier columns.
struct EquationRule {
  double intercept = 0.0;
  std::vector<EquationTerm> terms;
  double noise_sigma = 0.0;
};

using ColumnRule = std::variant<UniformRule, NormalRule, LogNormalRule,
                                ExponentialRule, CategoricalRule, EquationRule>;

struct SimColumn {
  ColumnSpec spec;
  ColumnRule rule;
};

// Addressed as "<column>.<param>": a, b, mu, sigma, lambda, intercept,
// noise_sigma, coef<i> (equation term i), w<i> (categorical weight i).
struct FreeParameter {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
};

struct SimulatorSpec {
  // Evaluation order; equations may only reference earlier columns.
  std::vector<SimColumn> columns;
  std::vector<FreeParameter> free_params;
  // Set by Calibrate; selects the "level5" vs "level6" provenance label.
  bool calibrated = false;
};

Schema SimulatorSchema(const SimulatorSpec& spec);

absl::Status ValidateSimulatorSpec(const SimulatorSpec& spec);

absl::StatusOr<double> GetParameter(const SimulatorSpec& spec,
                                    const std::string& name);
absl::Status SetParameter(SimulatorSpec& spec, const std::string& name,
                          double value);

// Hex digest of the spec's canonical JSON, first 16 characters.
std::string SimulatorSpecHash(const SimulatorSpec& spec);

// Rows are independent; cell (row, column) consumes exactly one uniform from
// its own stream, so changing parameters never shifts the random numbers
// (common random numbers).
absl::StatusOr<Dataset> Simulate(const SimulatorSpec& spec, std::int64_t n,
                                 std::uint64_t seed);

enum class MomentKind { kMean, kStd, kQuantile, kFrequency };

struct TargetMoment {
  std::string column;
  MomentKind statistic = MomentKind::kMean;
  double q = 0.5;         // kQuantile
  std::string category;   // kFrequency
  double value = 0.0;
  double weight = 1.0;

  std::string Label() const;
};

struct CalibrationTarget {
  std::vector<TargetMoment> moments;
};

absl::Status ValidateCalibrationTarget(const CalibrationTarget& target);

// The statistic a moment describes, evaluated on `dataset` (its `value`
// field is ignored).
absl::StatusOr<double> ComputeMoment(const Dataset& dataset,
                                     const TargetMoment& moment);

// Fills every moment's value from `dataset`. This is the only point where
// real data meets the simulator, and only through these aggregates.
absl::StatusOr<CalibrationTarget> TargetFromData(
    const Dataset& dataset, std::vector<TargetMoment> moments);

struct CalibrationOptions {
  int budget = 200;
  std::size_t sim_n = 20000;
  std::uint64_t seed = 0;
};

struct CalibrationResult {
  SimulatorSpec spec;  // free parameters set to the best point, calibrated
  std::vector<double> theta;
  double loss = 0.0;
  double initial_loss = 0.0;
  std::vector<Evaluation> trace;
};

// L(theta) = sum_i w_i ((s_i(theta) - t_i) / max(|t_i|, 1e-6))^2, with s_i
// computed on sim_n simulated rows under a fixed seed.
absl::StatusOr<double> CalibrationLoss(const SimulatorSpec& spec,
                                       const CalibrationTarget& target,
                                       std::span<const double> theta,
                                       std::size_t sim_n, std::uint64_t seed);

// Nelder-Mead from the box centers with edges at 10% of each box width.
absl::StatusOr<CalibrationResult> Calibrate(const SimulatorSpec& spec,
                                            const CalibrationTarget& target,
                                            const CalibrationOptions& options);

// "iteration,<param names...>,loss" followed by one line per evaluation.
std::string CalibrationTraceCsv(const SimulatorSpec& spec,
                                const CalibrationResult& result);

// Scenario planting.

struct FixedValue {
  Cell value;
};
struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;
};
struct ChoiceOf {
  std::vector<Cell> options;
};
using TemplateValue = std::variant<FixedValue, UniformRange, ChoiceOf>;

struct Scenario {
  std::string name;
  // Must cover every schema column.
  std::map<std::string, TemplateValue> row_template;
  std::size_t count = 1;
  // Recorded in the sidecar; defaults to the scenario name when empty.
  std::string label;
};

struct PlantedRow {
  RowId row_id = 0;
  std::string scenario;
  std::string label;
};

struct PlantResult {
  Dataset dataset;
  std::vector<PlantedRow> ground_truth;  // sorted by row id
};

absl::StatusOr<PlantResult> PlantScenarios(const Dataset& dataset,
                                           const std::vector<Scenario>& scenarios,
                                           std::uint64_t seed);

// Corner-case sweep: a baseline row plus one row per distinct boundary value
// of each column, changed one factor at a time. Extras that violate the
// schema are skipped and listed.
struct CornerSweep {
  Dataset dataset;
  std::vector<std::string> skipped;
};

absl::StatusOr<CornerSweep> CornerCaseSweep(
    const Schema& schema,
    const std::map<std::string, std::vector<Cell>>& extras);

// Boundary values for one column, baseline first, duplicates removed.
std::vector<Cell> BoundaryValues(const ColumnSpec& column);

}  // namespace synthpriv

#endif  // SYNTHPRIV_SIMULATION_H_
