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

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.h"

namespace synthpriv {
namespace {

using testing::Categorical;
using testing::MixedPopulation;
using testing::MustCreate;
using testing::Numeric;

TEST(FidelityTest, SelfComparisonIsPerfect) {
  Dataset d = MixedPopulation(300, 1);
  SP_ASSERT_OK_AND_ASSIGN(FidelityReport f, Fidelity(d, d));
  EXPECT_EQ(f.composite, 0.0);
  ASSERT_EQ(f.ks.size(), 2u);
  ASSERT_EQ(f.tv.size(), 1u);
  ASSERT_TRUE(f.correlation_distance.has_value());
  EXPECT_NEAR(*f.correlation_distance, 0.0, 1e-12);
}

TEST(FidelityTest, HistogramShiftGivesHalfTotalVariation) {
  Schema schema = {Categorical("g", {"a", "b"})};
  Dataset real = MustCreate(schema, {{Cell(0)}, {Cell(0)}, {Cell(1)}, {Cell(1)}});
  Dataset synth = MustCreate(schema, {{Cell(0)}, {Cell(0)}, {Cell(0)}, {Cell(0)}});
  SP_ASSERT_OK_AND_ASSIGN(FidelityReport f, Fidelity(real, synth));
  EXPECT_DOUBLE_EQ(f.tv[0].second, 0.5);
  EXPECT_FALSE(f.correlation_distance.has_value());
  EXPECT_DOUBLE_EQ(f.composite, 0.5);
}

TEST(FidelityTest, DisjointSupportsGiveKsOfOne) {
  Schema schema = {Numeric("x", 0, 100)};
  Dataset real = MustCreate(schema, {{Cell(1.0)}, {Cell(2.0)}, {Cell(3.0)}});
  Dataset synth = MustCreate(schema, {{Cell(50.0)}, {Cell(60.0)}});
  SP_ASSERT_OK_AND_ASSIGN(FidelityReport f, Fidelity(real, synth));
  EXPECT_EQ(f.ks[0].second, 1.0);
  EXPECT_EQ(f.composite, 1.0);
}

TEST(FidelityTest, WeightsRenormalizeOverPresentGroups) {
  Dataset real = MixedPopulation(200, 2);
  Dataset other = MixedPopulation(200, 3, 1000);
  FidelityWeights w;
  w.ks = 2.0;
  w.tv = 0.0;
  w.correlation = 1.0;
  SP_ASSERT_OK_AND_ASSIGN(FidelityReport f, Fidelity(real, other, w));
  const double mean_ks = (f.ks[0].second + f.ks[1].second) / 2.0;
  EXPECT_NEAR(f.composite, (2.0 * mean_ks + *f.correlation_normalized) / 3.0,
              1e-12);
  // Two numeric columns: the normalizer is 2 sqrt(2).
  EXPECT_NEAR(*f.correlation_normalized,
              *f.correlation_distance / (2.0 * std::sqrt(2.0)), 1e-12);
}

// Binary label determined by the sign of x, with features x and y.
Dataset Labelled(std::size_t n, std::uint64_t seed, double flip) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    BitStream rng(MixSeed(seed, i));
    const double x = 2 * UniformOpen(rng) - 1;
    const double y = 2 * UniformOpen(rng) - 1;
    int label = x > 0 ? 1 : 0;
    if (UniformOpen(rng) < flip) label = 1 - label;
    rows.push_back({Cell(x), Cell(y), Cell(label)});
  }
  return MustCreate({Numeric("x", -1, 1), Numeric("y", -1, 1),
                     Categorical("label", {"neg", "pos"})},
                    std::move(rows));
}

Dataset Rows(const Dataset& d, std::size_t begin, std::size_t end) {
  std::vector<std::size_t> idx;
  for (std::size_t i = begin; i < end; ++i) idx.push_back(i);
  return SelectRows(d, idx, d.provenance());
}

const UtilityTask kTask{"label", {"x", "y"}};

TEST(UtilityTest, CopyMatchesRealBaseline) {
  Dataset all = Labelled(1000, 1, 0.1);
  Dataset train = Rows(all, 0, 600);
  Dataset test = Rows(all, 600, 1000);
  SP_ASSERT_OK_AND_ASSIGN(UtilityReport u, UtilityTstr(train, train, test, kTask));
  EXPECT_EQ(u.acc_synthetic, u.acc_real_baseline);
  EXPECT_GT(u.acc_real_baseline, 0.75);
  EXPECT_DOUBLE_EQ(u.uplift, u.acc_augmented - u.acc_real_baseline);
}

TEST(UtilityTest, LabelsIndependentOfFeaturesAreNearChance) {
  Dataset all = Labelled(2000, 2, 0.5);
  SP_ASSERT_OK_AND_ASSIGN(
      UtilityReport u,
      UtilityTstr(Rows(all, 0, 1000), Labelled(1000, 3, 0.5),
                  Rows(all, 1000, 2000), kTask));
  EXPECT_NEAR(u.acc_real_baseline, 0.5, 0.06);
  EXPECT_NEAR(u.acc_synthetic, 0.5, 0.06);
}

TEST(UtilityTest, SyntheticRowsFillAScarceTrainingSet) {
  Dataset all = Labelled(1006, 4, 0.0);
  Dataset scarce = Rows(all, 0, 6);
  Dataset test = Rows(all, 6, 1006);
  SP_ASSERT_OK_AND_ASSIGN(
      UtilityReport u, UtilityTstr(scarce, Labelled(2000, 5, 0.0), test, kTask));
  EXPECT_GT(u.uplift, 0.0);
  EXPECT_GT(u.acc_synthetic, u.acc_real_baseline);
}

TEST(UtilityTest, SharedRowIdsAreRejected) {
  Dataset all = Labelled(100, 6, 0.0);
  EXPECT_FALSE(UtilityTstr(all, all, all, kTask).ok());
}

TEST(UtilityTest, KnnArgumentErrors) {
  Dataset d = Labelled(10, 7, 0.0);
  EXPECT_FALSE(KnnAccuracy(d, d, kTask, 0, d).ok());
  EXPECT_FALSE(KnnAccuracy(d, d, kTask, 11, d).ok());
  EXPECT_FALSE(KnnAccuracy(d, d, {"label", {}}, 1, d).ok());
  EXPECT_FALSE(KnnAccuracy(d, d, {"label", {"x", "label"}}, 1, d).ok());
  EXPECT_FALSE(KnnAccuracy(d, d, {"x", {"y"}}, 1, d).ok());
  SP_ASSERT_OK_AND_ASSIGN(double self, KnnAccuracy(d, d, kTask, 1, d));
  EXPECT_EQ(self, 1.0);
}

}  // namespace
}  // namespace synthpriv
