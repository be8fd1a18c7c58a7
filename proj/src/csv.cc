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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {
namespace {

bool NeedsQuoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos ||
         (!field.empty() && (field.front() == ' ' || field.back() == ' '));
}

void AppendField(std::string& out, std::string_view field) {
  if (!NeedsQuoting(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
}

absl::StatusOr<Cell> ParseCell(const ColumnSpec& column,
                               const std::string& field) {
  switch (column.kind) {
    case ColumnKind::kContinuous:
    case ColumnKind::kInteger: {
      double value = 0.0;
      const char* begin = field.data();
      const char* end = begin + field.size();
      if (!field.empty() && *begin == '+') ++begin;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        return absl::InvalidArgumentError(
            absl::StrCat("cannot parse '", field, "' as a number"));
      }
      return Cell(value);
    }
    case ColumnKind::kCategorical:
      for (std::size_t i = 0; i < column.categories.size(); ++i) {
        if (column.categories[i] == field) return Cell(static_cast<int>(i));
      }
      return absl::InvalidArgumentError(
          absl::StrCat("unknown category '", field, "'"));
    case ColumnKind::kIdentifier:
      return Cell(field);
  }
  return absl::InternalError("unhandled column kind");
}

}  // namespace

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRecords(
    std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool record_open = false;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == '"' && field.empty()) {
      // Quoted field.
      const std::size_t start_line = line;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (text[i] == '\n') ++line;
        field.push_back(text[i++]);
      }
      if (!closed) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: unterminated quoted field", start_line));
      }
      if (i < text.size() && text[i] != ',' && text[i] != '\n' &&
          text[i] != '\r') {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: unexpected character after closing quote", line));
      }
      record_open = true;
      continue;
    }
    if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      record_open = true;
      ++i;
      continue;
    }
    if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      record_open = false;
      ++line;
      continue;
    }
    if (ch == '"') {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: quote inside unquoted field", line));
    }
    field.push_back(ch);
    record_open = true;
    ++i;
  }
  if (record_open) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

absl::StatusOr<Dataset> ParseCsv(std::string_view text, const Schema& schema,
                                 std::string provenance) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(schema));
  SYNTHPRIV_ASSIGN_OR_RETURN(auto records, ParseCsvRecords(text));
  if (records.empty()) {
    return absl::InvalidArgumentError("missing header row");
  }
  const std::vector<std::string>& header = records.front();
  if (header.size() != schema.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "header has %d columns, schema has %d", header.size(), schema.size()));
  }
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (header[c] != schema[c].name) {
      return absl::InvalidArgumentError(
          absl::StrFormat("header column %d is '%s', schema expects '%s'", c,
                          header[c], schema[c].name));
    }
  }
  std::vector<Row> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const std::size_t data_row = r - 1;
    if (records[r].size() != schema.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d: expected %d fields, found %d", data_row,
                          schema.size(), records[r].size()));
    }
    Row row;
    row.reserve(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const std::string& field = records[r][c];
      if (field.empty()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("row %d, column %d ('%s'): missing value",
                            data_row, c, schema[c].name));
      }
      absl::StatusOr<Cell> cell = ParseCell(schema[c], field);
      absl::Status status =
          cell.ok() ? ValidateCell(schema[c], *cell) : cell.status();
      if (!status.ok()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("row %d, column %d ('%s'): %s", data_row, c,
                            schema[c].name, status.message()));
      }
      row.push_back(*std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return Dataset::Create(schema, std::move(rows), std::move(provenance));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path, " for writing"));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path, const Schema& schema) {
  SYNTHPRIV_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  absl::StatusOr<Dataset> dataset = ParseCsv(text, schema, path);
  if (!dataset.ok()) return Annotate(dataset.status(), path);
  return dataset;
}

std::string FormatCsv(const Dataset& dataset) {
  std::string out;
  const Schema& schema = dataset.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (c > 0) out.push_back(',');
    AppendField(out, schema[c].name);
  }
  out.push_back('\n');
  for (const Row& row : dataset.rows()) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (c > 0) out.push_back(',');
      AppendField(out, RenderCell(schema[c], row[c]));
    }
    out.push_back('\n');
  }
  return out;
}

absl::Status WriteCsv(const Dataset& dataset, const std::string& path) {
  return WriteFile(path, FormatCsv(dataset));
}

}  // namespace synthpriv
