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

#ifndef SYNTHPRIV_CSV_H_
#define SYNTHPRIV_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"

namespace synthpriv {

// RFC-4180 records: comma separated, double-quote escaping, CRLF or LF line
// ends. Fails on an unterminated quote or stray characters after a quote.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRecords(
    std::string_view text);

// Parses CSV text against `schema`. The header must list the schema names in
// order; empty cells are rejected. Row ids are 0..n-1.
absl::StatusOr<Dataset> ParseCsv(std::string_view text, const Schema& schema,
                                 std::string provenance);

absl::StatusOr<Dataset> LoadCsv(const std::string& path, const Schema& schema);

// Numbers use the shortest decimal that round-trips exactly.
std::string FormatCsv(const Dataset& dataset);

absl::Status WriteCsv(const Dataset& dataset, const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace synthpriv

#endif  // SYNTHPRIV_CSV_H_
