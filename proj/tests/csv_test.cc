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

#include "synthpriv/csv.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace synthpriv {
namespace {

using testing::Categorical;
using testing::Identifier;
using testing::Integer;
using testing::MustCreate;
using testing::Numeric;

TEST(CsvTest, ThreeRowsTwoColumns) {
  Schema schema = {Numeric("x", 0, 10), Categorical("c", {"a", "b"})};
  SP_ASSERT_OK_AND_ASSIGN(Dataset d,
                          ParseCsv("x,c\n1,a\n2.5,b\n3,a\n", schema, "mem"));
  EXPECT_EQ(d.num_rows(), 3u);
  EXPECT_EQ(d.row_ids(), (std::vector<RowId>{0, 1, 2}));
  EXPECT_EQ(d.numeric(1, 0), 2.5);
  EXPECT_EQ(d.code(1, 1), 1);
  EXPECT_EQ(d.provenance(), "mem");
}

TEST(CsvTest, BoundsViolationNamesRowAndColumn) {
  Schema schema = {Numeric("x", 0, 10)};
  auto d = ParseCsv("x\n1\n17\n", schema, "t");
  ASSERT_FALSE(d.ok());
  const std::string msg(d.status().message());
  EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("outside bounds"), std::string::npos) << msg;
}

TEST(CsvTest, HeaderOnlyIsEmptyDataset) {
  SP_ASSERT_OK_AND_ASSIGN(Dataset d,
                          ParseCsv("x\n", {Numeric("x", 0, 10)}, "t"));
  EXPECT_EQ(d.num_rows(), 0u);
}

TEST(CsvTest, RejectsMissingValuesAndBadHeaders) {
  Schema schema = {Numeric("x", 0, 10), Numeric("y", 0, 10)};
  EXPECT_FALSE(ParseCsv("x,y\n1,\n", schema, "t").ok());
  EXPECT_FALSE(ParseCsv("y,x\n1,2\n", schema, "t").ok());
  EXPECT_FALSE(ParseCsv("x,y\n1,2,3\n", schema, "t").ok());
  EXPECT_FALSE(ParseCsv("x,y\nabc,2\n", schema, "t").ok());
  EXPECT_FALSE(ParseCsv("", schema, "t").ok());
}

TEST(CsvTest, QuotedFieldsFollowRfc4180) {
  SP_ASSERT_OK_AND_ASSIGN(
      auto records, ParseCsvRecords("a,b\n\"x, y\",\"say \"\"hi\"\"\"\r\n"));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[1][0], "x, y");
  EXPECT_EQ(records[1][1], "say \"hi\"");
}

TEST(CsvTest, RoundTripIsCellExact) {
  Schema schema = {Identifier("id"), Numeric("x", -1e9, 1e9),
                   Integer("n", -5, 5), Categorical("c", {"p", "q r"})};
  std::vector<Row> rows = {
      {Cell(std::string("a,\"b\"")), Cell(1.5), Cell(-5.0), Cell(1)},
      {Cell(std::string("Z")), Cell(0.1 + 0.2), Cell(3.0), Cell(0)},
      {Cell(std::string("é")), Cell(1.0 / 3.0), Cell(0.0), Cell(1)},
      {Cell(std::string("x")), Cell(-123456789.123456789), Cell(5.0), Cell(0)},
  };
  Dataset d = MustCreate(schema, rows);
  const std::string text = FormatCsv(d);
  SP_ASSERT_OK_AND_ASSIGN(Dataset back, ParseCsv(text, schema, "again"));
  EXPECT_TRUE(back.SameContent(d));
  EXPECT_EQ(back.numeric(1, 1), 0.1 + 0.2);  // bit-equal
  EXPECT_EQ(FormatCsv(back), text);
}

TEST(CsvTest, ShortestRoundTripNumbers) {
  Dataset d = MustCreate({Numeric("x", 0, 10)}, {{Cell(1.5)}, {Cell(2.0)}});
  EXPECT_EQ(FormatCsv(d), "x\n1.5\n2\n");
}

TEST(CsvTest, EmptyDatasetWritesHeaderOnly) {
  Dataset d = Dataset::Empty({Numeric("x", 0, 1), Numeric("y", 0, 1)}, "t");
  EXPECT_EQ(FormatCsv(d), "x,y\n");
}

TEST(CsvTest, FileRoundTrip) {
  const auto dir = testing::TempDir("csv");
  Dataset d = testing::MixedPopulation(50, 3);
  const std::string path = (dir / "d.csv").string();
  SP_ASSERT_OK(WriteCsv(d, path));
  SP_ASSERT_OK_AND_ASSIGN(Dataset back, LoadCsv(path, d.schema()));
  EXPECT_TRUE(back.SameContent(d));
  EXPECT_EQ(back.provenance(), path);
  EXPECT_FALSE(LoadCsv((dir / "missing.csv").string(), d.schema()).ok());
}

}  // namespace
}  // namespace synthpriv
