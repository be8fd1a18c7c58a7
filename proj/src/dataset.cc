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

#include "synthpriv/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "synthpriv/random.h"
#include "synthpriv/status_macros.h"

namespace synthpriv {

std::string ColumnKindName(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kContinuous:
      return "numeric-continuous";
    case ColumnKind::kInteger:
      return "numeric-integer";
    case ColumnKind::kCategorical:
      return "categorical";
    case ColumnKind::kIdentifier:
      return "identifier";
  }
  return "unknown";
}

absl::StatusOr<ColumnKind> ParseColumnKind(std::string_view name) {
  for (ColumnKind kind :
       {ColumnKind::kContinuous, ColumnKind::kInteger,
        ColumnKind::kCategorical, ColumnKind::kIdentifier}) {
    if (ColumnKindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown column kind '", std::string(name), "'"));
}

absl::Status ValidateSchema(const Schema& schema) {
  std::set<std::string> names;
  for (const ColumnSpec& column : schema) {
    if (column.name.empty()) {
      return absl::InvalidArgumentError("column with empty name");
    }
    if (!names.insert(column.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name '", column.name, "'"));
    }
    if (column.is_identifier() && !column.pii) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", column.name, "': identifier columns must be pii"));
    }
    if (column.bounds.has_value()) {
      if (!column.is_numeric()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column '", column.name, "': bounds on a non-numeric column"));
      }
      if (!std::isfinite(column.bounds->min) ||
          !std::isfinite(column.bounds->max) ||
          column.bounds->min > column.bounds->max) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column '", column.name, "': bounds require finite min <= max"));
      }
    }
    if (column.is_categorical()) {
      if (column.categories.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column '", column.name, "': categorical without categories"));
      }
      std::set<std::string> seen(column.categories.begin(),
                                 column.categories.end());
      if (seen.size() != column.categories.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "column '", column.name, "': duplicate category"));
      }
    } else if (!column.categories.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", column.name, "': categories on a non-categorical column"));
    }
  }
  return absl::OkStatus();
}

std::optional<std::size_t> FindColumn(const Schema& schema,
                                      std::string_view name) {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name == name) return i;
  }
  return std::nullopt;
}

std::string RenderCell(const ColumnSpec& column, const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) {
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), *v);
    return std::string(buffer, end);
  }
  if (const int* code = std::get_if<int>(&cell)) {
    if (*code >= 0 && static_cast<std::size_t>(*code) < column.categories.size()) {
      return column.categories[*code];
    }
    return absl::StrCat("#", *code);
  }
  return std::get<std::string>(cell);
}

absl::Status ValidateCell(const ColumnSpec& column, const Cell& cell) {
  switch (column.kind) {
    case ColumnKind::kContinuous:
    case ColumnKind::kInteger: {
      const double* v = std::get_if<double>(&cell);
      if (v == nullptr) {
        return absl::InvalidArgumentError("expected a numeric value");
      }
      if (!std::isfinite(*v)) {
        return absl::InvalidArgumentError("non-finite numeric value");
      }
      if (column.kind == ColumnKind::kInteger && std::trunc(*v) != *v) {
        return absl::InvalidArgumentError(
            absl::StrCat("value ", RenderCell(column, cell),
                         " is not an integer"));
      }
      if (column.bounds.has_value() && !column.bounds->Contains(*v)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "value %s outside bounds [%s, %s]", RenderCell(column, cell),
            RenderCell(column, Cell(column.bounds->min)),
            RenderCell(column, Cell(column.bounds->max))));
      }
      return absl::OkStatus();
    }
    case ColumnKind::kCategorical: {
      const int* code = std::get_if<int>(&cell);
      if (code == nullptr) {
        return absl::InvalidArgumentError("expected a category code");
      }
      if (*code < 0 ||
          static_cast<std::size_t>(*code) >= column.categories.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("category code ", *code, " out of range"));
      }
      return absl::OkStatus();
    }
    case ColumnKind::kIdentifier: {
      const std::string* text = std::get_if<std::string>(&cell);
      if (text == nullptr) {
        return absl::InvalidArgumentError("expected identifier text");
      }
      if (text->empty()) {
        return absl::InvalidArgumentError("empty identifier");
      }
      return absl::OkStatus();
    }
  }
  return absl::InternalError("unhandled column kind");
}

absl::StatusOr<Dataset> Dataset::Create(Schema schema, std::vector<Row> rows,
                                        std::vector<RowId> row_ids,
                                        std::string provenance) {
  SYNTHPRIV_RETURN_IF_ERROR(ValidateSchema(schema));
  if (row_ids.size() != rows.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "row id count ", row_ids.size(), " != row count ", rows.size()));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != schema.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d has %d values, schema has %d columns", r,
                          rows[r].size(), schema.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      absl::Status status = ValidateCell(schema[c], rows[r][c]);
      if (!status.ok()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("row %d, column '%s': %s", r, schema[c].name,
                            status.message()));
      }
    }
  }
  std::unordered_set<RowId> ids(row_ids.begin(), row_ids.end());
  if (ids.size() != row_ids.size()) {
    return absl::InvalidArgumentError("row ids are not unique");
  }
  return Dataset(std::move(schema), std::move(rows), std::move(row_ids),
                 std::move(provenance));
}

absl::StatusOr<Dataset> Dataset::Create(Schema schema, std::vector<Row> rows,
                                        std::string provenance) {
  std::vector<RowId> ids(rows.size());
  std::iota(ids.begin(), ids.end(), RowId{0});
  return Create(std::move(schema), std::move(rows), std::move(ids),
                std::move(provenance));
}

Dataset Dataset::Empty(Schema schema, std::string provenance) {
  return Dataset(std::move(schema), {}, {}, std::move(provenance));
}

std::vector<double> Dataset::NumericColumn(std::size_t col) const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const Row& row : rows_) out.push_back(std::get<double>(row[col]));
  return out;
}

std::vector<int> Dataset::CodeColumn(std::size_t col) const {
  std::vector<int> out;
  out.reserve(rows_.size());
  for (const Row& row : rows_) out.push_back(std::get<int>(row[col]));
  return out;
}

Dataset Dataset::WithProvenance(std::string provenance) const {
  return Dataset(schema_, rows_, row_ids_, std::move(provenance));
}

bool Dataset::SameContent(const Dataset& other) const {
  return schema_ == other.schema_ && rows_ == other.rows_;
}

absl::StatusOr<SplitResult> SplitHoldout(const Dataset& dataset,
                                         double member_fraction,
                                         std::uint64_t seed) {
  if (!(member_fraction > 0.0 && member_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("member fraction ", member_fraction, " not in (0, 1)"));
  }
  const std::size_t n = dataset.num_rows();
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("split needs at least 2 rows, got ", n));
  }
  // nearbyint under the default rounding mode is round-half-to-even.
  const auto num_members = static_cast<std::size_t>(
      std::nearbyint(member_fraction * static_cast<double>(n)));
  if (num_members == 0) {
    return absl::InvalidArgumentError("split leaves members empty");
  }
  if (num_members >= n) {
    return absl::InvalidArgumentError("split leaves non-members empty");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  BitStream rng(MixSeed(seed, 0x5711u));
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[UniformIndex(rng, i + 1)]);
  }
  std::vector<std::size_t> members(order.begin(), order.begin() + num_members);
  std::vector<std::size_t> rest(order.begin() + num_members, order.end());
  std::sort(members.begin(), members.end());
  std::sort(rest.begin(), rest.end());
  return SplitResult{
      SelectRows(dataset, members, dataset.provenance() + "#members"),
      SelectRows(dataset, rest, dataset.provenance() + "#non-members"), seed};
}

Dataset SelectRows(const Dataset& dataset,
                   const std::vector<std::size_t>& indices,
                   std::string provenance) {
  std::vector<Row> rows;
  std::vector<RowId> ids;
  rows.reserve(indices.size());
  ids.reserve(indices.size());
  for (std::size_t i : indices) {
    rows.push_back(dataset.rows()[i]);
    ids.push_back(dataset.row_ids()[i]);
  }
  // Rows of a valid dataset stay valid; ids stay unique only if indices do.
  return Dataset::Create(dataset.schema(), std::move(rows), std::move(ids),
                         std::move(provenance))
      .value();
}

absl::StatusOr<Dataset> ProjectColumns(const Dataset& dataset,
                                       const std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  Schema schema;
  for (const std::string& name : names) {
    auto idx = dataset.ColumnIndex(name);
    if (!idx.has_value()) {
      return absl::NotFoundError(absl::StrCat("unknown column '", name, "'"));
    }
    cols.push_back(*idx);
    schema.push_back(dataset.column(*idx));
  }
  std::vector<Row> rows;
  rows.reserve(dataset.num_rows());
  for (const Row& row : dataset.rows()) {
    Row out;
    out.reserve(cols.size());
    for (std::size_t c : cols) out.push_back(row[c]);
    rows.push_back(std::move(out));
  }
  return Dataset::Create(std::move(schema), std::move(rows), dataset.row_ids(),
                         dataset.provenance());
}

Dataset DropIdentifiers(const Dataset& dataset) {
  std::vector<std::string> keep;
  for (const ColumnSpec& column : dataset.schema()) {
    if (!column.is_identifier()) keep.push_back(column.name);
  }
  return ProjectColumns(dataset, keep).value();
}

}  // namespace synthpriv
