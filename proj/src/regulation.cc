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

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace synthpriv {
namespace {

constexpr Applicability kA = Applicability::kApplicable;
constexpr Applicability kNA = Applicability::kNotApplicable;

struct StaticRow {
  const char* attack;
  const char* display_name;
  std::array<Applicability, 4> flags;
  std::optional<AttackKind> kind;  // nullopt: never evaluated here
};

const std::array<StaticRow, 4>& Table() {
  static const std::array<StaticRow, 4> kTable = {{
      {"MIA", "Membership Inference Attack", {kA, kA, kA, kNA},
       AttackKind::kMembership},
      {"AttributeInference", "Attribute Inference Attack", {kA, kA, kA, kNA},
       AttackKind::kAttribute},
      {"PropertyInference", "Property Inference Attack", {kNA, kNA, kA, kA},
       AttackKind::kProperty},
      {"ModelInference", "Model Inference Attack", {kA, kA, kA, kA},
       std::nullopt},
  }};
  return kTable;
}

}  // namespace

std::string ApplicabilityName(Applicability a) {
  return a == Applicability::kApplicable ? "Applicable" : "N/A";
}

RiskMatrix RegulationMatrix(const std::vector<AttackReport>& reports) {
  RiskMatrix matrix;
  for (const StaticRow& s : Table()) {
    RiskRow row;
    row.attack = s.attack;
    row.display_name = s.display_name;
    row.flags = s.flags;
    if (s.kind.has_value()) {
      for (const AttackReport& report : reports) {
        if (report.attack != *s.kind) continue;
        row.evaluated = true;
        row.score = report.score;
        row.baseline = report.baseline;
        row.algorithm = report.algorithm;
        break;
      }
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

std::string RiskMatrixFlagsCsv(const RiskMatrix& matrix) {
  std::string out = absl::StrCat("attack,", absl::StrJoin(kRegulations, ","),
                                 "\n");
  for (const RiskRow& row : matrix.rows) {
    std::vector<std::string> fields = {row.display_name};
    for (Applicability a : row.flags) fields.push_back(ApplicabilityName(a));
    absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  }
  return out;
}

std::string RiskMatrixText(const RiskMatrix& matrix) {
  std::string out = absl::StrFormat("%-30s %-11s %-11s %-16s %-16s %s\n",
                                    "", kRegulations[0], kRegulations[1],
                                    kRegulations[2], kRegulations[3],
                                    "Evidence");
  for (const RiskRow& row : matrix.rows) {
    std::string evidence = "not evaluated";
    if (row.evaluated) {
      evidence = absl::StrFormat("score %.4f (baseline %.4f, %s)", *row.score,
                                 *row.baseline, row.algorithm);
    }
    absl::StrAppend(
        &out, absl::StrFormat("%-30s %-11s %-11s %-16s %-16s %s\n",
                              row.display_name, ApplicabilityName(row.flags[0]),
                              ApplicabilityName(row.flags[1]),
                              ApplicabilityName(row.flags[2]),
                              ApplicabilityName(row.flags[3]), evidence));
  }
  return out;
}

nlohmann::json RiskMatrixToJson(const RiskMatrix& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RiskRow& row : matrix.rows) {
    nlohmann::json flags = nlohmann::json::object();
    for (std::size_t i = 0; i < kRegulations.size(); ++i) {
      flags[kRegulations[i]] = ApplicabilityName(row.flags[i]);
    }
    nlohmann::json entry = {{"attack", row.attack},
                            {"name", row.display_name},
                            {"flags", std::move(flags)},
                            {"status", row.evaluated ? "evaluated"
                                                     : "not evaluated"}};
    if (row.evaluated) {
      entry["score"] = *row.score;
      entry["baseline"] = *row.baseline;
      entry["algorithm"] = row.algorithm;
    }
    rows.push_back(std::move(entry));
  }
  return rows;
}

}  // namespace synthpriv
