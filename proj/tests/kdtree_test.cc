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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "test_util.h"

namespace synthpriv {
namespace {

using testing::Categorical;
using testing::MustCreate;
using testing::Numeric;

constexpr double kInf = std::numeric_limits<double>::infinity();

Dataset Clusters() {
  // Four well-separated clusters of 25 points at the corners of a square.
  std::vector<Row> rows;
  BitStream rng(3);
  const double centers[4][2] = {{0, 0}, {0, 10}, {10, 0}, {10, 10}};
  for (const auto& c : centers) {
    for (int i = 0; i < 25; ++i) {
      rows.push_back({Cell(c[0] + 0.5 * UniformOpen(rng)),
                      Cell(c[1] + 0.5 * UniformOpen(rng)),
                      Cell(static_cast<int>(UniformIndex(rng, 2)))});
    }
  }
  return MustCreate({Numeric("x", -1, 11), Numeric("y", -1, 11),
                     Categorical("k", {"p", "q"})},
                    std::move(rows));
}

TEST(KdTreeTest, SingleLeafWhenMinLeafIsN) {
  Dataset d = Clusters();
  KdTreeOptions o;
  o.min_leaf = d.num_rows();
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(d, o));
  ASSERT_EQ(m.leaves.size(), 1u);
  EXPECT_EQ(m.leaves[0].noised_count, 100.0);
  EXPECT_EQ(m.depth, 1);
  for (std::size_t dim = 0; dim < 2; ++dim) {
    const auto v = d.NumericColumn(dim);
    EXPECT_EQ(m.leaves[0].lower[dim], *std::min_element(v.begin(), v.end()));
    EXPECT_EQ(m.leaves[0].upper[dim], *std::max_element(v.begin(), v.end()));
  }
}

TEST(KdTreeTest, FourClustersGiveFourLeavesOfTwentyFive) {
  KdTreeOptions o;
  o.min_leaf = 20;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(Clusters(), o));
  ASSERT_EQ(m.leaves.size(), 4u);
  for (const KdLeaf& leaf : m.leaves) EXPECT_EQ(leaf.noised_count, 25.0);
  EXPECT_EQ(m.depth, 3);
  EXPECT_EQ(m.split_rule, kKdSplitRule);
}

TEST(KdTreeTest, LeafBoxesPartitionTheRoot) {
  Dataset d = DropIdentifiers(testing::MixedPopulation(500, 5));
  KdTreeOptions o;
  o.min_leaf = 30;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(d, o));
  // Every training point falls in at least one leaf box, and the leaf
  // counts add up to n when no noise is applied.
  double total = 0;
  for (const KdLeaf& leaf : m.leaves) total += leaf.noised_count;
  EXPECT_EQ(total, 500.0);
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    int hits = 0;
    for (const KdLeaf& leaf : m.leaves) {
      bool inside = true;
      for (std::size_t dim = 0; dim < m.numeric_columns.size(); ++dim) {
        const double v = d.numeric(r, m.numeric_columns[dim]);
        inside = inside && v >= leaf.lower[dim] && v <= leaf.upper[dim];
      }
      hits += inside;
    }
    EXPECT_GE(hits, 1);
  }
  EXPECT_LE(m.depth, m.max_depth);
}

TEST(KdTreeTest, LeafNoiseVarianceMatchesClosedForm) {
  std::vector<Row> rows;
  BitStream rng(21);
  for (int i = 0; i < 50; ++i) {
    rows.push_back({Cell(100 * UniformOpen(rng)), Cell(100 * UniformOpen(rng))});
  }
  Dataset d = MustCreate({Numeric("x", 0, 100), Numeric("y", 0, 100)}, rows);
  KdTreeOptions exact;
  exact.min_leaf = 10;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel truth, FitKdTree(d, exact));
  const double eps = 3.0;
  const double scale = truth.depth / eps;
  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    KdTreeOptions o = exact;
    o.epsilon = eps;
    o.seed = MixSeed(99, rep);
    SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(d, o));
    ASSERT_EQ(m.leaves.size(), truth.leaves.size());
    EXPECT_DOUBLE_EQ(m.leaf_noise_scale(), scale);
    for (std::size_t l = 0; l < m.leaves.size(); ++l) {
      const double e = m.leaves[l].noised_count - truth.leaves[l].noised_count;
      sum += e;
      sum2 += e * e;
      ++count;
    }
  }
  const double mean = sum / count;
  const double var = sum2 / count - mean * mean;
  EXPECT_NEAR(var, 2 * scale * scale, 0.10 * 2 * scale * scale);
}

TEST(KdTreeTest, SamplesStayInRootBox) {
  Dataset d = DropIdentifiers(testing::MixedPopulation(300, 6));
  KdTreeOptions o;
  o.min_leaf = 15;
  o.epsilon = 1.0;
  o.seed = 4;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(d, o));
  SP_ASSERT_OK_AND_ASSIGN(Dataset s, SampleKdTree(m, 5000, 5));
  for (std::size_t dim = 0; dim < 2; ++dim) {
    const auto v = d.NumericColumn(dim);
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    for (double x : s.NumericColumn(dim)) {
      EXPECT_GE(x, lo);
      EXPECT_LE(x, hi);
    }
  }
}

TEST(KdTreeTest, LeafSelectionFollowsCounts) {
  KdTreeModel m;
  m.schema = {Numeric("x", 0, 2)};
  m.numeric_columns = {0};
  m.nodes = {KdNode{0, 1.0, 1, 2, -1, 1}, KdNode{-1, 0, -1, -1, 0, 2},
             KdNode{-1, 0, -1, -1, 1, 2}};
  m.leaves = {KdLeaf{{0.0}, {1.0}, 75.0, {}}, KdLeaf{{1.0}, {2.0}, 25.0, {}}};
  m.depth = 2;
  const int n = 100000;
  SP_ASSERT_OK_AND_ASSIGN(Dataset s, SampleKdTree(m, n, 8));
  int left = 0;
  for (double x : s.NumericColumn(0)) left += x < 1.0;
  EXPECT_NEAR(left / double(n), 0.75, 0.01);
}

TEST(KdTreeTest, DegenerateBoxReturnsThePoint) {
  std::vector<Row> rows(12, Row{Cell(3.5), Cell(-2.0)});
  Dataset d = MustCreate({Numeric("a", -10, 10), Numeric("b", -10, 10)}, rows);
  KdTreeOptions o;
  o.min_leaf = 12;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(d, o));
  SP_ASSERT_OK_AND_ASSIGN(Dataset s, SampleKdTree(m, 1, 1));
  EXPECT_EQ(s.numeric(0, 0), 3.5);
  EXPECT_EQ(s.numeric(0, 1), -2.0);
}

TEST(KdTreeTest, Errors) {
  std::vector<Row> cats(5, Row{Cell(0)});
  EXPECT_FALSE(
      FitKdTree(MustCreate({Categorical("k", {"a"})}, cats), KdTreeOptions{}).ok());
  KdTreeOptions o;
  o.min_leaf = 101;
  EXPECT_FALSE(FitKdTree(Clusters(), o).ok());
  KdTreeOptions bad_eps;
  bad_eps.epsilon = -1;
  EXPECT_FALSE(FitKdTree(Clusters(), bad_eps).ok());

  KdTreeOptions fine;
  fine.min_leaf = 100;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(Clusters(), fine));
  m.leaves[0].noised_count = 0.0;
  EXPECT_FALSE(SampleKdTree(m, 10, 1).ok());
}

TEST(KdTreeTest, CategoricalHistogramsAreNormalized) {
  KdTreeOptions o;
  o.min_leaf = 20;
  o.epsilon = 0.5;
  o.seed = 17;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(Clusters(), o));
  for (const KdLeaf& leaf : m.leaves) {
    EXPECT_GE(leaf.noised_count, 0.0);
    ASSERT_EQ(leaf.category_weights.size(), 1u);
    double s = 0;
    for (double w : leaf.category_weights[0]) {
      EXPECT_GE(w, 0.0);
      s += w;
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
  SP_EXPECT_OK(ValidateKdTreeModel(m));
}

TEST(KdTreeTest, SamplingIsDeterministicAndPrefixStable) {
  KdTreeOptions o;
  o.min_leaf = 20;
  SP_ASSERT_OK_AND_ASSIGN(KdTreeModel m, FitKdTree(Clusters(), o));
  SP_ASSERT_OK_AND_ASSIGN(Dataset a, SampleKdTree(m, 100, 3));
  SP_ASSERT_OK_AND_ASSIGN(Dataset b, SampleKdTree(m, 1000, 3));
  for (std::size_t r = 0; r < 100; ++r) EXPECT_EQ(a.rows()[r], b.rows()[r]);
  EXPECT_EQ(kInf, m.epsilon);
}

}  // namespace
}  // namespace synthpriv
