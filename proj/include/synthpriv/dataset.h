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

#ifndef SYNTHPRIV_DATASET_H_
#define SYNTHPRIV_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace synthpriv {

enum class ColumnKind {
  kContinuous,   // "numeric-continuous"
  kInteger,      // "numeric-integer"
  kCategorical,  // "categorical"
  kIdentifier,   // "identifier"
};

std::string ColumnKindName(ColumnKind kind);
absl::StatusOr<ColumnKind> ParseColumnKind(std::string_view name);

struct Bounds {
  double min = 0.0;
  double max = 0.0;

  bool Contains(double v) const { return v >= min && v <= max; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  bool pii = false;
  std::optional<Bounds> bounds;
  // Only for kCategorical; a cell stores its index into this list.
  std::vector<std::string> categories;

  bool is_numeric() const {
    return kind == ColumnKind::kContinuous || kind == ColumnKind::kInteger;
  }
  bool is_categorical() const { return kind == ColumnKind::kCategorical; }
  bool is_identifier() const { return kind == ColumnKind::kIdentifier; }

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

using Schema = std::vector<ColumnSpec>;

// Checks every ColumnSpec invariant: unique names, identifier implies pii,
// ordered bounds, non-empty duplicate-free categories.
absl::Status ValidateSchema(const Schema& schema);

std::optional<std::size_t> FindColumn(const Schema& schema,
                                      std::string_view name);

// Numeric value, category code, or identifier text, matching the column kind.
using Cell = std::variant<double, int, std::string>;

using Row = std::vector<Cell>;
using RowId = std::uint64_t;

// Renders a cell the way it is written to CSV (category label for codes,
// shortest round-trip decimal for numbers).
std::string RenderCell(const ColumnSpec& column, const Cell& cell);

// Immutable, validated table. The only way to obtain one is Create(), which
// runs the full schema/row validation.
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(Schema schema, std::vector<Row> rows,
                                        std::vector<RowId> row_ids,
                                        std::string provenance);

  // Row ids 0..n-1.
  static absl::StatusOr<Dataset> Create(Schema schema, std::vector<Row> rows,
                                        std::string provenance);

  static Dataset Empty(Schema schema, std::string provenance);

  const Schema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<RowId>& row_ids() const { return row_ids_; }
  const std::string& provenance() const { return provenance_; }

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_columns() const { return schema_.size(); }
  const ColumnSpec& column(std::size_t c) const { return schema_[c]; }
  std::optional<std::size_t> ColumnIndex(std::string_view name) const {
    return FindColumn(schema_, name);
  }

  double numeric(std::size_t row, std::size_t col) const {
    return std::get<double>(rows_[row][col]);
  }
  int code(std::size_t row, std::size_t col) const {
    return std::get<int>(rows_[row][col]);
  }
  const std::string& text(std::size_t row, std::size_t col) const {
    return std::get<std::string>(rows_[row][col]);
  }

  std::vector<double> NumericColumn(std::size_t col) const;
  std::vector<int> CodeColumn(std::size_t col) const;

  // Same rows and schema, different provenance label.
  Dataset WithProvenance(std::string provenance) const;

  // Cell-by-cell equality of schema and rows (ignores ids and provenance).
  bool SameContent(const Dataset& other) const;

 private:
  Dataset(Schema schema, std::vector<Row> rows, std::vector<RowId> row_ids,
          std::string provenance)
      : schema_(std::move(schema)),
        rows_(std::move(rows)),
        row_ids_(std::move(row_ids)),
        provenance_(std::move(provenance)) {}

  Schema schema_;
  std::vector<Row> rows_;
  std::vector<RowId> row_ids_;
  std::string provenance_;
};

// Validates one cell against its column; used by Create and by callers that
// need to check a value before building a row (templates, extras).
absl::Status ValidateCell(const ColumnSpec& column, const Cell& cell);

struct SplitResult {
  Dataset members;
  Dataset non_members;
  std::uint64_t seed = 0;
};

// |members| = round-half-even(member_fraction * n). Both sides must be
// non-empty. Each side keeps the input's row order.
absl::StatusOr<SplitResult> SplitHoldout(const Dataset& dataset,
                                         double member_fraction,
                                         std::uint64_t seed);

// Rows at `indices`, in that order, with their original ids.
Dataset SelectRows(const Dataset& dataset,
                   const std::vector<std::size_t>& indices,
                   std::string provenance);

// Keeps the named columns in the given order.
absl::StatusOr<Dataset> ProjectColumns(const Dataset& dataset,
                                       const std::vector<std::string>& names);

// Drops identifier-kind columns.
Dataset DropIdentifiers(const Dataset& dataset);

}  // namespace synthpriv

#endif  // SYNTHPRIV_DATASET_H_
