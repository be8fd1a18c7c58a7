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

#include "synthpriv/simulation.h"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "synthpriv/statistics.h"
#include "test_util.h"

namespace synthpriv {
namespace {

using testing::Categorical;
using testing::Identifier;
using testing::Integer;
using testing::MustCreate;
using testing::Numeric;
using testing::Unbounded;

SimulatorSpec NormalSpec(double mu, double sigma) {
  SimulatorSpec spec;
  spec.columns.push_back({Unbounded("x"), NormalRule{mu, sigma}});
  return spec;
}

TEST(SimulateTest, StandardNormalMoments) {
  SP_ASSERT_OK_AND_ASSIGN(Dataset d, Simulate(NormalSpec(0, 1), 100000, 1));
  const auto x = d.NumericColumn(0);
  EXPECT_NEAR(Mean(x), 0.0, 0.01);
  EXPECT_NEAR(StdDev(x), 1.0, 0.01);
  EXPECT_TRUE(d.provenance().starts_with("level6:"));
}

TEST(SimulateTest, NoiselessEquationIsExact) {
  SimulatorSpec spec;
  spec.columns.push_back({Unbounded("x"), UniformRule{-5, 5}});
  EquationRule eq;
  eq.terms.push_back({"x", 2.0});
  spec.columns.push_back({Unbounded("y"), eq});
  SP_ASSERT_OK_AND_ASSIGN(Dataset d, Simulate(spec, 500, 2));
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    EXPECT_EQ(d.numeric(r, 1), 2.0 * d.numeric(r, 0));
  }
}

TEST(SimulateTest, CategoricalTermsAndThresholds) {
  SimulatorSpec spec;
  spec.columns.push_back(
      {Categorical("g", {"a", "b"}), CategoricalRule{{1.0, 1.0}}});
  spec.columns.push_back({Unbounded("x"), UniformRule{0, 1}});
  EquationRule eq;
  eq.intercept = 1.0;
  EquationTerm is_b{"g", 10.0, EquationTerm::Kind::kEquals, "b"};
  EquationTerm big_x{"x", 100.0, EquationTerm::Kind::kGreater, "", 0.5};
  eq.terms = {is_b, big_x};
  spec.columns.push_back({Unbounded("y"), eq});
  SP_ASSERT_OK_AND_ASSIGN(Dataset d, Simulate(spec, 400, 3));
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    const double expect = 1.0 + (d.code(r, 0) == 1 ? 10.0 : 0.0) +
                          (d.numeric(r, 1) > 0.5 ? 100.0 : 0.0);
    EXPECT_EQ(d.numeric(r, 2), expect);
  }
}

TEST(SimulateTest, ZeroRowsAndErrors) {
  SP_ASSERT_OK_AND_ASSIGN(Dataset d, Simulate(NormalSpec(0, 1), 0, 1));
  EXPECT_EQ(d.num_rows(), 0u);
  EXPECT_EQ(d.num_columns(), 1u);
  EXPECT_FALSE(Simulate(NormalSpec(0, 1), -1, 1).ok());
  EXPECT_FALSE(Simulate(NormalSpec(0, -1), 10, 1).ok());
  EXPECT_FALSE(Simulate(SimulatorSpec{}, 10, 1).ok());

  SimulatorSpec forward;
  EquationRule eq;
  eq.terms.push_back({"later", 1.0});
  forward.columns.push_back({Unbounded("y"), eq});
  forward.columns.push_back({Unbounded("later"), UniformRule{0, 1}});
  EXPECT_FALSE(ValidateSimulatorSpec(forward).ok());
}

TEST(SimulateTest, DeterministicAndPrefixStable) {
  SP_ASSERT_OK_AND_ASSIGN(Dataset a, Simulate(NormalSpec(3, 2), 100, 9));
  SP_ASSERT_OK_AND_ASSIGN(Dataset b, Simulate(NormalSpec(3, 2), 1000, 9));
  for (std::size_t r = 0; r < 100; ++r) EXPECT_EQ(a.rows()[r], b.rows()[r]);
}

TEST(ParameterTest, GetAndSetByDottedName) {
  SimulatorSpec spec = NormalSpec(0, 1);
  SP_ASSERT_OK(SetParameter(spec, "x.mu", 4.5));
  SP_ASSERT_OK_AND_ASSIGN(double mu, GetParameter(spec, "x.mu"));
  EXPECT_EQ(mu, 4.5);
  EXPECT_FALSE(GetParameter(spec, "x.lambda").ok());
  EXPECT_FALSE(GetParameter(spec, "nodot").ok());
  EXPECT_FALSE(GetParameter(spec, "z.mu").ok());
}

TEST(CalibrateTest, RecoversMeanAndStd) {
  SimulatorSpec spec = NormalSpec(0, 1);
  spec.free_params = {{"x.mu", -10, 10}, {"x.sigma", 0.1, 10}};
  CalibrationTarget target;
  target.moments = {{"x", MomentKind::kMean, 0.5, "", 5.0},
                    {"x", MomentKind::kStd, 0.5, "", 2.0}};
  CalibrationOptions options;
  options.budget = 200;
  options.sim_n = 20000;
  options.seed = 4;
  SP_ASSERT_OK_AND_ASSIGN(CalibrationResult r, Calibrate(spec, target, options));
  SP_ASSERT_OK_AND_ASSIGN(double mu, GetParameter(r.spec, "x.mu"));
  SP_ASSERT_OK_AND_ASSIGN(double sigma, GetParameter(r.spec, "x.sigma"));
  EXPECT_NEAR(mu, 5.0, 0.1);
  EXPECT_NEAR(sigma, 2.0, 0.1);
  EXPECT_TRUE(r.spec.calibrated);
  EXPECT_LE(r.loss, r.initial_loss);
  EXPECT_LE(r.trace.size(), 200u);

  // Re-evaluating the best point with the same seed reproduces the loss.
  SP_ASSERT_OK_AND_ASSIGN(
      double again, CalibrationLoss(spec, target, r.theta, options.sim_n, 4));
  EXPECT_EQ(again, r.loss);

  SP_ASSERT_OK_AND_ASSIGN(Dataset d, Simulate(r.spec, 10, 1));
  EXPECT_TRUE(d.provenance().starts_with("level5:"));
}

TEST(CalibrateTest, LossMatchesHandComputation) {
  SimulatorSpec spec;
  spec.columns.push_back({Unbounded("x"), UniformRule{0, 1}});
  spec.free_params = {{"x.b", 0.5, 4}};
  CalibrationTarget target;
  target.moments = {{"x", MomentKind::kMean, 0.5, "", 2.0, 3.0}};
  const std::vector<double> theta = {2.0};
  SP_ASSERT_OK_AND_ASSIGN(double loss,
                          CalibrationLoss(spec, target, theta, 1000, 8));
  SimulatorSpec manual = spec;
  SP_ASSERT_OK(SetParameter(manual, "x.b", 2.0));
  SP_ASSERT_OK_AND_ASSIGN(Dataset d, Simulate(manual, 1000, 8));
  const double e = (Mean(d.NumericColumn(0)) - 2.0) / 2.0;
  EXPECT_NEAR(loss, 3.0 * e * e, 1e-12);
}

TEST(CalibrateTest, InvalidTargets) {
  SimulatorSpec spec = NormalSpec(0, 1);
  spec.free_params = {{"x.mu", -1, 1}};
  CalibrationTarget empty;
  EXPECT_FALSE(Calibrate(spec, empty, {}).ok());
  CalibrationTarget unknown;
  unknown.moments = {{"nope", MomentKind::kMean, 0.5, "", 1.0}};
  EXPECT_FALSE(Calibrate(spec, unknown, {}).ok());
  CalibrationTarget freq;
  freq.moments = {{"x", MomentKind::kFrequency, 0.5, "a", 0.3}};
  EXPECT_FALSE(Calibrate(spec, freq, {}).ok());
}

TEST(TargetFromDataTest, FillsValuesFromTheDataset) {
  Dataset d = MustCreate({Numeric("x", 0, 10), Categorical("g", {"a", "b"})},
                         {{Cell(1.0), Cell(0)},
                          {Cell(2.0), Cell(1)},
                          {Cell(3.0), Cell(1)},
                          {Cell(6.0), Cell(1)}});
  SP_ASSERT_OK_AND_ASSIGN(
      CalibrationTarget t,
      TargetFromData(d, {{"x", MomentKind::kMean},
                         {"x", MomentKind::kQuantile, 0.5},
                         {"g", MomentKind::kFrequency, 0.5, "b"}}));
  EXPECT_EQ(t.moments[0].value, 3.0);
  EXPECT_EQ(t.moments[1].value, 2.5);
  EXPECT_EQ(t.moments[2].value, 0.75);
  EXPECT_EQ(t.moments[2].Label(), "g:freq:b");
}

Dataset Background(std::size_t n) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({Cell(std::string("R") + std::to_string(i)),
                    Cell(static_cast<double>(i % 50)), Cell(0)});
  }
  return MustCreate({Identifier("id"), Numeric("age", 0, 120),
                     Categorical("g", {"a", "b"})},
                    std::move(rows));
}

Scenario Fixed(std::string name, std::size_t count, double age) {
  Scenario s;
  s.name = std::move(name);
  s.count = count;
  s.row_template = {{"id", ChoiceOf{{Cell(std::string("X1")),
                                     Cell(std::string("X2"))}}},
                    {"age", FixedValue{Cell(age)}},
                    {"g", FixedValue{Cell(1)}}};
  return s;
}

TEST(PlantTest, PlantsRowsWithFreshIds) {
  Dataset base = Background(95);
  SP_ASSERT_OK_AND_ASSIGN(PlantResult r,
                          PlantScenarios(base, {Fixed("fraud", 5, 99)}, 3));
  EXPECT_EQ(r.dataset.num_rows(), 100u);
  ASSERT_EQ(r.ground_truth.size(), 5u);
  std::set<RowId> planted;
  for (const PlantedRow& p : r.ground_truth) {
    EXPECT_GE(p.row_id, 95u);
    EXPECT_EQ(p.label, "fraud");
    planted.insert(p.row_id);
  }
  std::size_t found = 0;
  for (std::size_t i = 0; i < r.dataset.num_rows(); ++i) {
    if (planted.contains(r.dataset.row_ids()[i])) {
      ++found;
      EXPECT_EQ(r.dataset.numeric(i, 1), 99.0);
    }
  }
  EXPECT_EQ(found, 5u);
}

TEST(PlantTest, CountsPerScenario) {
  Scenario b = Fixed("b", 7, 10);
  b.label = "labelled";
  SP_ASSERT_OK_AND_ASSIGN(
      PlantResult r, PlantScenarios(Background(20), {Fixed("a", 3, 50), b}, 4));
  std::size_t na = 0, nb = 0;
  for (const PlantedRow& p : r.ground_truth) {
    na += p.scenario == "a";
    nb += p.scenario == "b" && p.label == "labelled";
  }
  EXPECT_EQ(na, 3u);
  EXPECT_EQ(nb, 7u);
  EXPECT_EQ(r.dataset.num_rows(), 30u);
}

TEST(PlantTest, EmptyListIsIdentity) {
  Dataset base = Background(10);
  SP_ASSERT_OK_AND_ASSIGN(PlantResult r, PlantScenarios(base, {}, 4));
  EXPECT_TRUE(r.dataset.SameContent(base));
  EXPECT_TRUE(r.ground_truth.empty());
}

TEST(PlantTest, InvalidTemplatesAreRejected) {
  Scenario missing = Fixed("m", 1, 10);
  missing.row_template.erase("g");
  EXPECT_FALSE(PlantScenarios(Background(5), {missing}, 1).ok());
  EXPECT_FALSE(PlantScenarios(Background(5), {Fixed("o", 1, 500)}, 1).ok());
}

TEST(CornerSweepTest, BoundedNumericExtremes) {
  const std::vector<Cell> v = BoundaryValues(Numeric("x", -100, 100));
  EXPECT_EQ(v, (std::vector<Cell>{Cell(0.0), Cell(-100.0), Cell(100.0)}));
  // Integer bounds are rounded inward and zero lies outside, so the
  // baseline falls back to the lower bound.
  EXPECT_EQ(BoundaryValues(Integer("n", 1.5, 9.5)),
            (std::vector<Cell>{Cell(2.0), Cell(9.0)}));
}

TEST(CornerSweepTest, EveryCategoryAppears) {
  const std::vector<Cell> v = BoundaryValues(Categorical("g", {"a", "b", "c"}));
  EXPECT_EQ(v, (std::vector<Cell>{Cell(0), Cell(1), Cell(2)}));
}

TEST(CornerSweepTest, RowCountFormula) {
  Schema schema = {Numeric("x", -100, 100), Categorical("g", {"a", "b", "c"}),
                   Identifier("id")};
  std::map<std::string, std::vector<Cell>> extras = {
      {"x", {Cell(50.0), Cell(1000.0)}}, {"ghost", {Cell(1.0)}}};
  SP_ASSERT_OK_AND_ASSIGN(CornerSweep s, CornerCaseSweep(schema, extras));
  std::size_t expected = 1;
  for (const ColumnSpec& c : schema) expected += BoundaryValues(c).size() - 1;
  expected += 1;  // the one valid extra value
  EXPECT_EQ(s.dataset.num_rows(), expected);
  EXPECT_EQ(s.skipped.size(), 2u);
}

}  // namespace
}  // namespace synthpriv
