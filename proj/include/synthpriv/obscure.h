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

#ifndef SYNTHPRIV_OBSCURE_H_
#define SYNTHPRIV_OBSCURE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

// Level 1: obscure PII columns and leave every other column untouched.

struct DropAction {};

// Keeps the trailing `keep_last` characters of the cell's text rendering and
// replaces the rest with `fill`.
struct MaskAction {
  int keep_last = 4;
  char fill = 'X';
};

// Maps each distinct value to a distinct "PREFIX-000143"-style token drawn
// from a seeded pool.
struct SurrogateAction {
  std::uint64_t seed = 0;
};

// Salted SHA-256, truncated to 16 hex characters.
struct HashAction {
  std::string salt;
};

using ObscureAction =
    std::variant<DropAction, MaskAction, SurrogateAction, HashAction>;

std::string ActionName(const ObscureAction& action);

struct ObscurePolicy {
  // Keyed by column name.
  std::map<std::string, ObscureAction> actions;
};

struct PolicyAudit {
  std::vector<std::string> pii_columns;
  // (column, action name) for every policy entry on an existing PII column.
  std::vector<std::pair<std::string, std::string>> covered;
  std::vector<std::string> uncovered;
  // Policy entries naming columns that do not exist.
  std::vector<std::string> dangling;
  // Policy entries naming existing non-PII columns.
  std::vector<std::string> non_pii;

  bool clean() const {
    return uncovered.empty() && dangling.empty() && non_pii.empty();
  }
};

PolicyAudit AuditPolicy(const Dataset& dataset, const ObscurePolicy& policy);

// Masked, surrogate and hashed columns come out as pii identifier columns;
// dropped columns are removed. Fails on uncovered PII columns and on entries
// naming unknown or non-PII columns.
absl::StatusOr<Dataset> Obscure(const Dataset& dataset,
                                const ObscurePolicy& policy);

// Code-point aware; keep_last <= 0 masks everything.
std::string MaskValue(std::string_view value, int keep_last, char fill);

std::string HashPseudonym(std::string_view value, std::string_view salt);

}  // namespace synthpriv

#endif  // SYNTHPRIV_OBSCURE_H_
