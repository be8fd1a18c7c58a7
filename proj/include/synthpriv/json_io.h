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

#ifndef SYNTHPRIV_JSON_IO_H_
#define SYNTHPRIV_JSON_IO_H_

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/attacks.h"
#include "synthpriv/copula.h"
#include "synthpriv/dataset.h"
#include "synthpriv/kdtree.h"
#include "synthpriv/noise.h"
#include "synthpriv/obscure.h"
#include "synthpriv/simulation.h"

namespace synthpriv {

// Every reader here returns InvalidArgument with a path-like location
// ("columns[2].bounds") instead of letting a json exception escape.

using Json = nlohmann::json;

absl::StatusOr<Json> ParseJson(std::string_view text);
absl::StatusOr<Json> LoadJson(const std::string& path);
// Two-space indented with a trailing newline. Object keys come out sorted,
// so equal values always dump to equal bytes.
std::string DumpJson(const Json& json);

// Schema sidecar: an array of {name, kind, pii, bounds: [min, max],
// categories: [...]}, or an object holding that array under "columns".
Json SchemaToJson(const Schema& schema);
absl::StatusOr<Schema> SchemaFromJson(const Json& json);
absl::StatusOr<Schema> LoadSchema(const std::string& path);

// Cells as they appear in configs: numbers for numeric columns, category
// labels for categorical ones, strings for identifiers.
Json CellToJson(const ColumnSpec& column, const Cell& cell);
// Converts the JSON type only; range checks are left to ValidateCell. An
// unknown category label comes back as code -1.
absl::StatusOr<Cell> CellFromJson(const ColumnSpec& column, const Json& json);

// {"<column>": {"action": "drop" | "mask" | "surrogate" | "hash", ...}}
Json PolicyToJson(const ObscurePolicy& policy);
absl::StatusOr<ObscurePolicy> PolicyFromJson(const Json& json);

// {"clamp_to_bounds": bool, "columns": {"<column>": {"mechanism": ...}}}
Json NoiseConfigToJson(const NoiseConfig& config);
absl::StatusOr<NoiseConfig> NoiseConfigFromJson(const Json& json);

inline constexpr char kModelFormat[] = "synthpriv-model";
inline constexpr int kModelFormatVersion = 1;

using GeneratorModel = std::variant<CopulaModel, KdTreeModel>;

Json ModelToJson(const GeneratorModel& model);
absl::StatusOr<GeneratorModel> ModelFromJson(const Json& json);

Json SimulatorSpecToJson(const SimulatorSpec& spec);
absl::StatusOr<SimulatorSpec> SimulatorSpecFromJson(const Json& json);

// Moments without a "value" are allowed only when `require_values` is false;
// their value is left at 0 for the caller to fill from data.
Json CalibrationTargetToJson(const CalibrationTarget& target);
absl::StatusOr<CalibrationTarget> CalibrationTargetFromJson(
    const Json& json, bool require_values);

Json ThresholdsToJson(const CertificationThresholds& thresholds);
absl::StatusOr<CertificationThresholds> ThresholdsFromJson(const Json& json);

// [{"name", "count", "label", "template": {"<column>": {"value": v} |
// {"uniform": [lo, hi]} | {"choice": [v, ...]}}}]
absl::StatusOr<std::vector<Scenario>> ScenariosFromJson(const Json& json,
                                                        const Schema& schema);
Json GroundTruthToJson(const std::vector<PlantedRow>& planted);

// {"<column>": [v, ...]}
absl::StatusOr<std::map<std::string, std::vector<Cell>>> ExtrasFromJson(
    const Json& json, const Schema& schema);

Json AttackReportToJson(const AttackReport& report);
Json CertificationToJson(const Certification& certification);

// Optional-number helper shared by config readers: missing gives
// `fallback`, null or "inf" gives infinity.
absl::StatusOr<double> NumberOr(const Json& object, const std::string& key,
                                double fallback);

}  // namespace synthpriv

#endif  // SYNTHPRIV_JSON_IO_H_
