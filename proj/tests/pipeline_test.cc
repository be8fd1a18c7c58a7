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

#include "synthpriv/pipeline.h"

#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "synthpriv/json_io.h"
#include "test_util.h"

namespace synthpriv {
namespace {

std::string SourcePath(const std::string& relative) {
  return std::string(SYNTHPRIV_SOURCE_DIR) + "/" + relative;
}

PipelineConfig MustLoad(const std::string& relative) {
  auto c = LoadPipelineConfig(SourcePath(relative));
  if (!c.ok()) {
    ADD_FAILURE() << c.status().ToString();
    std::abort();
  }
  return *std::move(c);
}

const Dataset& Reference() {
  static const Dataset* data = [] {
    auto d = LoadConfiguredData(MustLoad("configs/level1.json"));
    if (!d.ok()) std::abort();
    return new Dataset(*std::move(d));
  }();
  return *data;
}

TEST(PipelineTest, LevelOneMasksIdentifiers) {
  PipelineConfig config = MustLoad("configs/level1.json");
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r, RunPipelineOn(config, Reference()));
  EXPECT_EQ(r.report.achieved_level, 1);
  ASSERT_TRUE(r.report.policy_audit.has_value());
  EXPECT_TRUE(r.report.policy_audit->clean());
  const std::size_t id = *r.published.ColumnIndex("customer_id");
  ASSERT_EQ(r.published.num_rows(), r.members.num_rows());
  for (std::size_t i = 0; i < r.published.num_rows(); ++i) {
    const std::string& masked = r.published.text(i, id);
    const std::string& original = r.members.text(i, id);
    ASSERT_EQ(masked.size(), original.size());
    EXPECT_NE(masked, original);
    EXPECT_EQ(masked.substr(masked.size() - 4),
              original.substr(original.size() - 4));
    EXPECT_EQ(masked.substr(0, masked.size() - 4),
              std::string(masked.size() - 4, 'X'));
  }
  // A copy of the members is fully exposed to membership inference.
  ASSERT_NE(r.report.Find(AttackKind::kMembership), nullptr);
  EXPECT_GE(r.report.Find(AttackKind::kMembership)->score, 0.95);
}

TEST(PipelineTest, MembersAndHoldoutAreDisjoint) {
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r,
                          RunPipelineOn(MustLoad("configs/level1.json"),
                                        Reference()));
  std::set<RowId> members(r.members.row_ids().begin(), r.members.row_ids().end());
  for (RowId id : r.holdout.row_ids()) EXPECT_FALSE(members.contains(id));
  EXPECT_EQ(r.members.num_rows() + r.holdout.num_rows(), Reference().num_rows());
}

TEST(PipelineTest, LevelFourPassesWithShippedThresholds) {
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r,
                          RunPipelineOn(MustLoad("configs/level4.json"),
                                        Reference()));
  ASSERT_TRUE(r.report.certification.has_value());
  EXPECT_TRUE(r.report.certification->pass);
  EXPECT_EQ(r.report.achieved_level, 4);
  EXPECT_TRUE(r.report.provenance.starts_with("level4:"));
  ASSERT_TRUE(r.report.total_epsilon.has_value());
  EXPECT_EQ(*r.report.total_epsilon, 1.0);
}

TEST(PipelineTest, FailedCertificationFallsBackToLevelThree) {
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r,
                          RunPipelineOn(MustLoad("tests/data/level4_strict.json"),
                                        Reference()));
  ASSERT_TRUE(r.report.certification.has_value());
  EXPECT_FALSE(r.report.certification->pass);
  EXPECT_EQ(r.report.claimed_level, 4);
  EXPECT_EQ(r.report.achieved_level, 3);
  const auto& failing = r.report.certification->failing;
  EXPECT_NE(std::find(failing.begin(), failing.end(), "MIA"), failing.end());
  EXPECT_NE(CertificationReportText(r.report).find("MIA"), std::string::npos);
}

TEST(PipelineTest, LevelSixPlantsScenarioRows) {
  PipelineConfig config = MustLoad("configs/level6.json");
  const auto dir = testing::TempDir("pipeline_level6");
  config.out_dir = dir.string();
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r, RunPipelineOn(config, Reference()));
  EXPECT_EQ(r.report.achieved_level, 6);
  EXPECT_EQ(r.published.num_rows(), r.members.num_rows() + 5);
  SP_ASSERT_OK_AND_ASSIGN(Json truth, LoadJson((dir / "ground_truth.json").string()));
  EXPECT_EQ(truth["planted"].size(), 5u);
  EXPECT_EQ(truth["counts"]["young-high-balance"], 3);
  EXPECT_EQ(truth["counts"]["retiree-zero-income"], 2);
  EXPECT_TRUE(std::filesystem::exists(dir / "corner_cases.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
}

TEST(PipelineTest, RunsAreDeterministic) {
  PipelineConfig config = MustLoad("configs/level3.json");
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult a, RunPipelineOn(config, Reference()));
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult b, RunPipelineOn(config, Reference()));
  EXPECT_TRUE(a.published.SameContent(b.published));
  EXPECT_EQ(CertificationReportToJson(a.report),
            CertificationReportToJson(b.report));
  OverrideSeed(config, 8);
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult c, RunPipelineOn(config, Reference()));
  EXPECT_FALSE(a.published.SameContent(c.published));
}

TEST(PipelineTest, ConfigHashTracksOverridesButNotOutput) {
  PipelineConfig config = MustLoad("configs/level3.json");
  const std::string base = ConfigHash(config);
  EXPECT_EQ(base.size(), 16u);
  config.out_dir = "/somewhere/else";
  EXPECT_EQ(ConfigHash(config), base);
  OverrideLevel(config, 4);
  EXPECT_NE(ConfigHash(config), base);
  EXPECT_EQ(config.level, 4);
}

TEST(PipelineTest, ValidationRejectsIncompleteLevels) {
  PipelineConfig config = MustLoad("configs/level1.json");
  OverrideLevel(config, 2);
  EXPECT_FALSE(ValidatePipelineConfig(config).ok());
  OverrideLevel(config, 7);
  EXPECT_FALSE(ValidatePipelineConfig(config).ok());
  OverrideLevel(config, 1);
  config.member_fraction = 1.0;
  EXPECT_FALSE(ValidatePipelineConfig(config).ok());
}

TEST(PipelineTest, ConfigParseErrors) {
  const std::string base = SourcePath("configs");
  EXPECT_FALSE(PipelineConfigFromJson(Json::parse(R"({"level": "one"})"), base).ok());
  EXPECT_FALSE(PipelineConfigFromJson(
                   Json::parse(R"({"level": 1, "data": "a.csv",
                                   "schema": "a.json", "seed": -3})"),
                   base)
                   .ok());
  EXPECT_FALSE(LoadPipelineConfig(SourcePath("configs/does_not_exist.json")).ok());
}

TEST(PipelineTest, AuditReattacksAPublishedFile) {
  PipelineConfig run = MustLoad("configs/level3.json");
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r, RunPipelineOn(run, Reference()));
  PipelineConfig audit = MustLoad("configs/level4.json");
  SP_ASSERT_OK_AND_ASSIGN(CertificationReport report,
                          RunAudit(audit, Reference(), r.published));
  ASSERT_TRUE(report.certification.has_value());
  // The audit splits with the same seed, so it sees the same members.
  EXPECT_EQ(report.Find(AttackKind::kMembership)->score,
            r.report.Find(AttackKind::kMembership)->score);
}

TEST(PipelineTest, ReportJsonCarriesTheMatrix) {
  SP_ASSERT_OK_AND_ASSIGN(PipelineResult r,
                          RunPipelineOn(MustLoad("configs/level2.json"),
                                        Reference()));
  const Json j = CertificationReportToJson(r.report);
  for (const char* key : {"config_hash", "seed", "claimed_level", "achieved_level",
                          "attacks", "fidelity", "regulation_matrix"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["regulation_matrix"].size(), 4u);
  EXPECT_EQ(j["regulation_matrix"][0]["status"], "evaluated");
  EXPECT_EQ(j["regulation_matrix"][3]["status"], "not evaluated");
  EXPECT_EQ(*r.report.total_epsilon, 3.0);
}

TEST(CompareTest, ReplicateSeedsDiffer) {
  EXPECT_NE(ReplicateSeed(1, 0), ReplicateSeed(1, 1));
  EXPECT_EQ(ReplicateSeed(1, 3), ReplicateSeed(1, 3));
}

}  // namespace
}  // namespace synthpriv
