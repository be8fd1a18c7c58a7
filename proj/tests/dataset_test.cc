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

#include "synthpriv/dataset.h"

#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace synthpriv {
namespace {

using testing::Categorical;
using testing::Identifier;
using testing::Integer;
using testing::MustCreate;
using testing::Numeric;

Dataset Numbers(std::size_t n) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({Cell(double(i))});
  return MustCreate({Numeric("v", 0, 1e6)}, std::move(rows));
}

TEST(SchemaTest, RejectsDuplicateNames) {
  EXPECT_FALSE(ValidateSchema({Numeric("a", 0, 1), Numeric("a", 0, 1)}).ok());
}

TEST(SchemaTest, IdentifierMustBePii) {
  ColumnSpec id = Identifier("id");
  id.pii = false;
  EXPECT_FALSE(ValidateSchema({id}).ok());
  SP_EXPECT_OK(ValidateSchema({Identifier("id")}));
}

TEST(SchemaTest, BoundsAndCategoriesChecked) {
  EXPECT_FALSE(ValidateSchema({Numeric("a", 2, 1)}).ok());
  EXPECT_FALSE(ValidateSchema({Categorical("c", {})}).ok());
  EXPECT_FALSE(ValidateSchema({Categorical("c", {"x", "x"})}).ok());
  SP_EXPECT_OK(ValidateSchema({Numeric("a", 1, 1), Categorical("c", {"x"})}));
}

TEST(SchemaTest, KindNamesRoundTrip) {
  for (ColumnKind kind : {ColumnKind::kContinuous, ColumnKind::kInteger,
                          ColumnKind::kCategorical, ColumnKind::kIdentifier}) {
    auto parsed = ParseColumnKind(ColumnKindName(kind));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, kind);
  }
  EXPECT_FALSE(ParseColumnKind("float").ok());
}

TEST(DatasetTest, RejectsInvalidCells) {
  Schema schema = {Integer("n", 0, 10), Categorical("c", {"a", "b"})};
  EXPECT_FALSE(Dataset::Create(schema, {{Cell(17.0), Cell(0)}}, "t").ok());
  EXPECT_FALSE(Dataset::Create(schema, {{Cell(1.5), Cell(0)}}, "t").ok());
  EXPECT_FALSE(Dataset::Create(schema, {{Cell(1.0), Cell(2)}}, "t").ok());
  EXPECT_FALSE(Dataset::Create(schema, {{Cell(1.0)}}, "t").ok());
  SP_EXPECT_OK(Dataset::Create(schema, {{Cell(1.0), Cell(1)}}, "t").status());
}

TEST(DatasetTest, RejectsDuplicateRowIds) {
  Schema schema = {Numeric("v", 0, 1)};
  EXPECT_FALSE(Dataset::Create(schema, {{Cell(0.1)}, {Cell(0.2)}}, {4, 4}, "t")
                   .ok());
}

TEST(DatasetTest, SequentialIdsByDefault) {
  Dataset d = Numbers(3);
  EXPECT_EQ(d.row_ids(), (std::vector<RowId>{0, 1, 2}));
}

TEST(SplitTest, TenRowsHalfSplitIsRepeatable) {
  Dataset d = Numbers(10);
  SP_ASSERT_OK_AND_ASSIGN(SplitResult a, SplitHoldout(d, 0.5, 7));
  SP_ASSERT_OK_AND_ASSIGN(SplitResult b, SplitHoldout(d, 0.5, 7));
  EXPECT_EQ(a.members.num_rows(), 5u);
  EXPECT_EQ(a.non_members.num_rows(), 5u);
  EXPECT_EQ(a.members.row_ids(), b.members.row_ids());
  EXPECT_EQ(a.non_members.row_ids(), b.non_members.row_ids());
}

TEST(SplitTest, PartitionIsDisjointAndComplete) {
  Dataset d = Numbers(101);
  SP_ASSERT_OK_AND_ASSIGN(SplitResult s, SplitHoldout(d, 0.3, 99));
  std::set<RowId> seen;
  for (RowId id : s.members.row_ids()) EXPECT_TRUE(seen.insert(id).second);
  for (RowId id : s.non_members.row_ids()) EXPECT_TRUE(seen.insert(id).second);
  EXPECT_EQ(seen.size(), 101u);
  EXPECT_EQ(s.members.num_rows(), 30u);  // round(30.3)
}

TEST(SplitTest, RoundsHalfToEven) {
  // 0.5 * 5 = 2.5 rounds to 2; 0.5 * 7 = 3.5 rounds to 4.
  SP_ASSERT_OK_AND_ASSIGN(SplitResult five, SplitHoldout(Numbers(5), 0.5, 1));
  EXPECT_EQ(five.members.num_rows(), 2u);
  SP_ASSERT_OK_AND_ASSIGN(SplitResult seven, SplitHoldout(Numbers(7), 0.5, 1));
  EXPECT_EQ(seven.members.num_rows(), 4u);
}

TEST(SplitTest, EmptySideIsAnError) {
  auto s = SplitHoldout(Numbers(10), 0.999, 7);
  ASSERT_FALSE(s.ok());
  EXPECT_NE(std::string(s.status().message()).find("non-members empty"),
            std::string::npos);
  EXPECT_FALSE(SplitHoldout(Numbers(10), 0.0, 7).ok());
  EXPECT_FALSE(SplitHoldout(Numbers(10), 1.0, 7).ok());
  EXPECT_FALSE(SplitHoldout(Numbers(1), 0.5, 7).ok());
}

TEST(SplitTest, DifferentSeedsGiveDifferentPartitions) {
  Dataset d = Numbers(1000);
  SP_ASSERT_OK_AND_ASSIGN(SplitResult a, SplitHoldout(d, 0.5, 1));
  SP_ASSERT_OK_AND_ASSIGN(SplitResult b, SplitHoldout(d, 0.5, 2));
  EXPECT_NE(a.members.row_ids(), b.members.row_ids());
}

TEST(DatasetTest, DropIdentifiersAndProject) {
  Dataset d = testing::MixedPopulation(5, 1);
  Dataset no_ids = DropIdentifiers(d);
  EXPECT_EQ(no_ids.num_columns(), 3u);
  EXPECT_FALSE(no_ids.ColumnIndex("id").has_value());
  SP_ASSERT_OK_AND_ASSIGN(Dataset p, ProjectColumns(d, {"g", "x"}));
  EXPECT_EQ(p.column(0).name, "g");
  EXPECT_EQ(p.code(2, 0), d.code(2, 3));
  EXPECT_FALSE(ProjectColumns(d, {"nope"}).ok());
}

}  // namespace
}  // namespace synthpriv
