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

#include "synthpriv/obscure.h"

#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace synthpriv {
namespace {

using testing::Identifier;
using testing::MustCreate;
using testing::Numeric;

Dataset People(const std::vector<std::string>& ids) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    rows.push_back({Cell(ids[i]), Cell(0.25 * static_cast<double>(i))});
  }
  return MustCreate({Identifier("ssn"), Numeric("score", 0, 1e6)},
                    std::move(rows));
}

ObscurePolicy Policy(ObscureAction action) {
  ObscurePolicy p;
  p.actions["ssn"] = std::move(action);
  return p;
}

TEST(MaskTest, KeepsTrailingCharactersIncludingSeparators) {
  EXPECT_EQ(MaskValue("123-45-6789", 4, 'X'), "XXXXXXX6789");
  EXPECT_EQ(MaskValue("abc", 10, '*'), "abc");
  EXPECT_EQ(MaskValue("abc", 0, '*'), "***");
  EXPECT_EQ(MaskValue("", 2, '*'), "");
}

TEST(MaskTest, CountsCodePointsNotBytes) {
  EXPECT_EQ(MaskValue("héllo", 2, '#'), "###lo");
  EXPECT_EQ(MaskValue("ab€", 1, '#'), "##€");
}

TEST(ObscureTest, MaskLeavesNonPiiUntouched) {
  Dataset d = People({"123-45-6789", "987-65-4321"});
  SP_ASSERT_OK_AND_ASSIGN(Dataset out,
                          Obscure(d, Policy(MaskAction{4, 'X'})));
  EXPECT_EQ(out.text(0, 0), "XXXXXXX6789");
  EXPECT_EQ(out.text(1, 0), "XXXXXXX4321");
  ASSERT_EQ(out.num_rows(), d.num_rows());
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    EXPECT_EQ(out.numeric(r, 1), d.numeric(r, 1));
  }
  EXPECT_EQ(out.row_ids(), d.row_ids());
}

TEST(ObscureTest, SurrogateIsInjectiveAndDeterministic) {
  Dataset d = People({"A", "B", "A"});
  SP_ASSERT_OK_AND_ASSIGN(Dataset one, Obscure(d, Policy(SurrogateAction{5})));
  SP_ASSERT_OK_AND_ASSIGN(Dataset two, Obscure(d, Policy(SurrogateAction{5})));
  SP_ASSERT_OK_AND_ASSIGN(Dataset other, Obscure(d, Policy(SurrogateAction{6})));
  EXPECT_EQ(one.text(0, 0), one.text(2, 0));
  EXPECT_NE(one.text(0, 0), one.text(1, 0));
  EXPECT_NE(one.text(0, 0), "A");
  EXPECT_TRUE(one.SameContent(two));
  EXPECT_FALSE(one.SameContent(other));
  EXPECT_EQ(one.text(0, 0).rfind("SSN-", 0), 0u) << one.text(0, 0);
}

TEST(ObscureTest, SurrogatePreservesEqualityPartition) {
  std::vector<std::string> ids;
  for (int i = 0; i < 500; ++i) ids.push_back("v" + std::to_string(i % 37));
  Dataset d = People(ids);
  SP_ASSERT_OK_AND_ASSIGN(Dataset out, Obscure(d, Policy(SurrogateAction{1})));
  for (std::size_t a = 0; a < 60; ++a) {
    for (std::size_t b = 0; b < 60; ++b) {
      EXPECT_EQ(d.text(a, 0) == d.text(b, 0), out.text(a, 0) == out.text(b, 0));
    }
  }
}

TEST(ObscureTest, HashSaltsGiveDisjointTokens) {
  std::vector<std::string> ids;
  for (int i = 0; i < 1000; ++i) ids.push_back("id-" + std::to_string(i));
  Dataset d = People(ids);
  SP_ASSERT_OK_AND_ASSIGN(Dataset a, Obscure(d, Policy(HashAction{"salt-a"})));
  SP_ASSERT_OK_AND_ASSIGN(Dataset b, Obscure(d, Policy(HashAction{"salt-b"})));
  std::set<std::string> ta, tb;
  for (std::size_t r = 0; r < d.num_rows(); ++r) {
    EXPECT_EQ(a.text(r, 0).size(), 16u);
    ta.insert(a.text(r, 0));
    tb.insert(b.text(r, 0));
  }
  EXPECT_EQ(ta.size(), 1000u);
  for (const std::string& t : ta) EXPECT_EQ(tb.count(t), 0u);
  EXPECT_EQ(HashPseudonym("x", "s"), HashPseudonym("x", "s"));
}

TEST(ObscureTest, DropRemovesTheColumn) {
  Dataset d = People({"A", "B"});
  SP_ASSERT_OK_AND_ASSIGN(Dataset out, Obscure(d, Policy(DropAction{})));
  EXPECT_EQ(out.num_columns(), 1u);
  EXPECT_EQ(out.column(0).name, "score");
  EXPECT_EQ(out.num_rows(), 2u);
}

TEST(ObscureTest, ErrorsOnUncoveredOrUnknownColumns) {
  Dataset d = People({"A"});
  EXPECT_FALSE(Obscure(d, ObscurePolicy{}).ok());
  ObscurePolicy extra = Policy(DropAction{});
  extra.actions["nope"] = DropAction{};
  EXPECT_FALSE(Obscure(d, extra).ok());
  ObscurePolicy non_pii = Policy(DropAction{});
  non_pii.actions["score"] = DropAction{};
  EXPECT_FALSE(Obscure(d, non_pii).ok());
}

TEST(AuditPolicyTest, ReportsCoverage) {
  Dataset d = People({"A"});
  PolicyAudit full = AuditPolicy(d, Policy(DropAction{}));
  EXPECT_TRUE(full.uncovered.empty());
  EXPECT_TRUE(full.clean());
  EXPECT_EQ(full.pii_columns, std::vector<std::string>{"ssn"});
  ASSERT_EQ(full.covered.size(), 1u);
  EXPECT_EQ(full.covered[0].second, "drop");

  PolicyAudit none = AuditPolicy(d, ObscurePolicy{});
  EXPECT_EQ(none.uncovered, std::vector<std::string>{"ssn"});

  ObscurePolicy dangling = Policy(DropAction{});
  dangling.actions["ghost"] = DropAction{};
  EXPECT_EQ(AuditPolicy(d, dangling).dangling, std::vector<std::string>{"ghost"});
}

}  // namespace
}  // namespace synthpriv
