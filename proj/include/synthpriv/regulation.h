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

#ifndef SYNTHPRIV_REGULATION_H_
#define SYNTHPRIV_REGULATION_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthpriv/attacks.h"

namespace synthpriv {

// Regulation-risk matrix: which regulatory exposure each privacy attack
// family can create in financial applications. The applicability flags are
// static; attack reports only annotate rows with evidence.

inline constexpr std::array<const char*, 4> kRegulations = {
    "FCRA", "UDAAP", "Litigation Risk", "Competitive Risk"};

enum class Applicability { kApplicable, kNotApplicable };

std::string ApplicabilityName(Applicability a);  // "Applicable" or "N/A"

struct RiskRow {
  std::string attack;        // MIA, AttributeInference, PropertyInference,
                             // ModelInference
  std::string display_name;  // e.g. "Membership Inference Attack"
  std::array<Applicability, 4> flags{};
  bool evaluated = false;
  // Present when a report for this attack was supplied.
  std::optional<double> score;
  std::optional<double> baseline;
  std::string algorithm;
};

struct RiskMatrix {
  std::vector<RiskRow> rows;
};

RiskMatrix RegulationMatrix(const std::vector<AttackReport>& reports);

// Header "attack,FCRA,UDAAP,Litigation Risk,Competitive Risk", then one line
// per row with the display name and flags only.
std::string RiskMatrixFlagsCsv(const RiskMatrix& matrix);
std::string RiskMatrixText(const RiskMatrix& matrix);
nlohmann::json RiskMatrixToJson(const RiskMatrix& matrix);

}  // namespace synthpriv

#endif  // SYNTHPRIV_REGULATION_H_
