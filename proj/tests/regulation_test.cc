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

#include "synthpriv/regulation.h"

#include <gtest/gtest.h>

namespace synthpriv {
namespace {

constexpr Applicability A = Applicability::kApplicable;
constexpr Applicability N = Applicability::kNotApplicable;

TEST(RegulationMatrixTest, FlagsPerAttack) {
  const RiskMatrix m = RegulationMatrix({});
  ASSERT_EQ(m.rows.size(), 4u);
  const std::array<Applicability, 4> expected[] = {
      {A, A, A, N}, {A, A, A, N}, {N, N, A, A}, {A, A, A, A}};
  const char* names[] = {"MIA", "AttributeInference", "PropertyInference",
                         "ModelInference"};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(m.rows[i].attack, names[i]);
    EXPECT_EQ(m.rows[i].flags, expected[i]) << names[i];
  }
}

TEST(RegulationMatrixTest, NoReportsMeansNothingEvaluated) {
  const RiskMatrix m = RegulationMatrix({});
  for (const RiskRow& row : m.rows) {
    EXPECT_FALSE(row.evaluated);
    EXPECT_FALSE(row.score.has_value());
  }
  for (const auto& entry : RiskMatrixToJson(m)) {
    EXPECT_EQ(entry["status"], "not evaluated");
  }
}

TEST(RegulationMatrixTest, ReportsAttachEvidence) {
  AttackReport mia;
  mia.attack = AttackKind::kMembership;
  mia.algorithm = kMiaAlgorithm;
  mia.score = 0.61;
  mia.baseline = 0.5;
  const RiskMatrix m = RegulationMatrix({mia});
  EXPECT_TRUE(m.rows[0].evaluated);
  EXPECT_EQ(*m.rows[0].score, 0.61);
  EXPECT_EQ(m.rows[0].algorithm, kMiaAlgorithm);
  EXPECT_FALSE(m.rows[1].evaluated);
  // Model inference is listed but has no implementation to attach.
  EXPECT_FALSE(m.rows[3].evaluated);
  EXPECT_NE(RiskMatrixText(m).find("score 0.6100"), std::string::npos);
}

TEST(RegulationMatrixTest, FlagsCsvLayout) {
  const std::string csv = RiskMatrixFlagsCsv(RegulationMatrix({}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "attack,FCRA,UDAAP,Litigation Risk,Competitive Risk");
  EXPECT_NE(csv.find("Property Inference Attack,N/A,N/A,Applicable,Applicable"),
            std::string::npos);
  EXPECT_EQ(ApplicabilityName(A), "Applicable");
  EXPECT_EQ(ApplicabilityName(N), "N/A");
}

}  // namespace
}  // namespace synthpriv
