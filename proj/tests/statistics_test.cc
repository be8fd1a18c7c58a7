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

#include "synthpriv/statistics.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "synthpriv/random.h"

namespace synthpriv {
namespace {

// Oracle: pairwise Mann-Whitney count, ties worth one half.
double PairwiseAuc(const std::vector<double>& pos,
                   const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * neg.size());
}

// Oracle: evaluate both empirical CDFs at every pooled point.
double BruteKs(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  double best = 0.0;
  for (double x : pooled) {
    const double fa =
        std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; }) /
        static_cast<double>(a.size());
    const double fb =
        std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; }) /
        static_cast<double>(b.size());
    best = std::max(best, std::fabs(fa - fb));
  }
  return best;
}

TEST(StatisticsTest, MeanStdQuantile) {
  const std::vector<double> v = {4, 1, 3, 2, 5};
  EXPECT_DOUBLE_EQ(Mean(v), 3.0);
  // Sample standard deviation with the n - 1 denominator.
  EXPECT_DOUBLE_EQ(StdDev(v), std::sqrt(2.5));
  EXPECT_DOUBLE_EQ(Quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.1), 1.4);
}

TEST(StatisticsTest, MidRanksAverageTies) {
  EXPECT_EQ(MidRanks(std::vector<double>{10, 20, 10, 30}),
            (std::vector<double>{1.5, 3, 1.5, 4}));
}

TEST(StatisticsTest, NormalQuantileInvertsCdf) {
  for (double p : {0.001, 0.1, 0.5, 0.8, 0.999}) {
    EXPECT_NEAR(NormalCdf(NormalQuantile(p)), p, 1e-12);
  }
  EXPECT_NEAR(NormalQuantile(0.975), 1.959963984540054, 1e-12);
}

TEST(StatisticsTest, AucMatchesPairwiseOracleWithTies) {
  BitStream rng(5);
  std::vector<double> pos, neg;
  for (int i = 0; i < 300; ++i) {
    pos.push_back(std::round(4.0 * UniformOpen(rng)) + 0.5);
    neg.push_back(std::round(4.0 * UniformOpen(rng)));
  }
  for (int i = 0; i < 50; ++i) neg.push_back(pos[i]);
  EXPECT_NEAR(RocAuc(pos, neg), PairwiseAuc(pos, neg), 1e-12);
}

TEST(StatisticsTest, AucExtremes) {
  EXPECT_DOUBLE_EQ(RocAuc(std::vector<double>{3, 4}, std::vector<double>{1, 2}),
                   1.0);
  EXPECT_DOUBLE_EQ(RocAuc(std::vector<double>{1}, std::vector<double>{1}), 0.5);
}

TEST(StatisticsTest, KsMatchesBruteForce) {
  BitStream rng(8);
  std::vector<double> a, b;
  for (int i = 0; i < 200; ++i) a.push_back(std::round(10 * UniformOpen(rng)));
  for (int i = 0; i < 150; ++i) {
    b.push_back(std::round(10 * UniformOpen(rng) + 1));
  }
  EXPECT_NEAR(KsStatistic(a, b), BruteKs(a, b), 1e-12);
  EXPECT_DOUBLE_EQ(KsStatistic(a, b), KsStatistic(b, a));
}

TEST(StatisticsTest, KsOfDisjointSupportsIsOne) {
  EXPECT_DOUBLE_EQ(KsStatistic(std::vector<double>{1, 2, 3},
                               std::vector<double>{10, 11}),
                   1.0);
}

TEST(StatisticsTest, TotalVariationArithmetic) {
  const std::vector<double> real = CategoryFrequencies(std::vector<int>{0, 1}, 2);
  const std::vector<double> synth =
      CategoryFrequencies(std::vector<int>{0, 0, 0}, 2);
  EXPECT_DOUBLE_EQ(TotalVariation(real, synth), 0.5);
  EXPECT_DOUBLE_EQ(TotalVariation(synth, real), 0.5);
}

TEST(StatisticsTest, PearsonOfLinearIsOne) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {3, 5, 7, 9};
  EXPECT_NEAR(PearsonCorrelation(x, y), 1.0, 1e-12);
  const std::vector<double> z = {9, 7, 5, 3};
  EXPECT_NEAR(PearsonCorrelation(x, z), -1.0, 1e-12);
}

}  // namespace
}  // namespace synthpriv
