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

#include "synthpriv/obscure.h"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "synthpriv/digest.h"
#include "synthpriv/random.h"

namespace synthpriv {
namespace {

constexpr std::uint64_t kMinSurrogatePool = 1000000;

bool IsContinuationByte(unsigned char ch) { return (ch & 0xC0) == 0x80; }

std::string SurrogatePrefix(std::string_view column) {
  std::string prefix;
  for (unsigned char ch : column) {
    prefix.push_back(std::isalnum(ch) ? static_cast<char>(std::toupper(ch))
                                      : '_');
  }
  return prefix;
}

int DecimalDigits(std::uint64_t v) {
  int digits = 1;
  while (v >= 10) {
    v /= 10;
    ++digits;
  }
  return digits;
}

std::vector<std::string> SurrogateColumn(const Dataset& dataset,
                                         std::size_t col,
                                         const SurrogateAction& action) {
  const ColumnSpec& spec = dataset.column(col);
  std::vector<std::string> rendered;
  rendered.reserve(dataset.num_rows());
  std::vector<std::string> distinct;
  std::unordered_map<std::string, std::size_t> index;
  for (const Row& row : dataset.rows()) {
    rendered.push_back(RenderCell(spec, row[col]));
    if (index.emplace(rendered.back(), distinct.size()).second) {
      distinct.push_back(rendered.back());
    }
  }
  const std::uint64_t pool =
      std::max<std::uint64_t>(kMinSurrogatePool, 10 * distinct.size());
  const int width = std::max(6, DecimalDigits(pool - 1));
  const std::string prefix = SurrogatePrefix(spec.name);

  // Draw without replacement, in first-appearance order of the values.
  BitStream rng(MixSeed(action.seed, 0x5077ULL));
  std::unordered_set<std::uint64_t> used;
  std::vector<std::string> tokens;
  tokens.reserve(distinct.size());
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    std::uint64_t draw;
    do {
      draw = UniformIndex(rng, pool);
    } while (!used.insert(draw).second);
    tokens.push_back(absl::StrFormat("%s-%0*d", prefix, width, draw));
  }
  std::vector<std::string> out;
  out.reserve(rendered.size());
  for (const std::string& value : rendered) {
    out.push_back(tokens[index.at(value)]);
  }
  return out;
}

}  // namespace

std::string ActionName(const ObscureAction& action) {
  struct Visitor {
    std::string_view operator()(const DropAction&) const { return "drop"; }
    std::string_view operator()(const MaskAction&) const { return "mask"; }
    std::string_view operator()(const SurrogateAction&) const {
      return "surrogate";
    }
    std::string_view operator()(const HashAction&) const { return "hash"; }
  };
  return std::string(std::visit(Visitor{}, action));
}

PolicyAudit AuditPolicy(const Dataset& dataset, const ObscurePolicy& policy) {
  PolicyAudit audit;
  for (const ColumnSpec& column : dataset.schema()) {
    if (!column.pii) continue;
    audit.pii_columns.push_back(column.name);
    auto it = policy.actions.find(column.name);
    if (it == policy.actions.end()) {
      audit.uncovered.push_back(column.name);
    } else {
      audit.covered.emplace_back(column.name,
                                 std::string(ActionName(it->second)));
    }
  }
  for (const auto& [name, action] : policy.actions) {
    auto idx = dataset.ColumnIndex(name);
    if (!idx.has_value()) {
      audit.dangling.push_back(name);
    } else if (!dataset.column(*idx).pii) {
      audit.non_pii.push_back(name);
    }
  }
  return audit;
}

std::string MaskValue(std::string_view value, int keep_last, char fill) {
  // Byte offsets where each code point starts.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!IsContinuationByte(static_cast<unsigned char>(value[i]))) {
      starts.push_back(i);
    }
  }
  const std::size_t n = starts.size();
  const std::size_t keep =
      keep_last <= 0 ? 0 : std::min<std::size_t>(n, keep_last);
  const std::size_t masked = n - keep;
  std::string out(masked, fill);
  if (keep > 0) out.append(value.substr(starts[masked]));
  return out;
}

std::string HashPseudonym(std::string_view value, std::string_view salt) {
  // Length-prefix the salt so (salt, value) pairs cannot collide by
  // concatenation.
  const std::string material =
      absl::StrCat(salt.size(), ":", std::string(salt), std::string(value));
  return Sha256Hex(material).substr(0, 16);
}

absl::StatusOr<Dataset> Obscure(const Dataset& dataset,
                                const ObscurePolicy& policy) {
  const PolicyAudit audit = AuditPolicy(dataset, policy);
  if (!audit.uncovered.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PII column '", audit.uncovered.front(), "' has no obscure action"));
  }
  if (!audit.dangling.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy names unknown column '", audit.dangling.front(), "'"));
  }
  if (!audit.non_pii.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy names non-PII column '", audit.non_pii.front(), "'"));
  }

  Schema schema;
  // For each output column: source column and its replacement cells (empty
  // when copied through).
  std::vector<std::size_t> source;
  std::vector<std::vector<std::string>> replaced;
  for (std::size_t c = 0; c < dataset.num_columns(); ++c) {
    const ColumnSpec& column = dataset.column(c);
    auto it = policy.actions.find(column.name);
    if (it == policy.actions.end()) {
      schema.push_back(column);
      source.push_back(c);
      replaced.emplace_back();
      continue;
    }
    const ObscureAction& action = it->second;
    if (std::holds_alternative<DropAction>(action)) continue;

    std::vector<std::string> cells;
    if (const auto* surrogate = std::get_if<SurrogateAction>(&action)) {
      cells = SurrogateColumn(dataset, c, *surrogate);
    } else {
      cells.reserve(dataset.num_rows());
      for (const Row& row : dataset.rows()) {
        const std::string text = RenderCell(column, row[c]);
        if (const auto* mask = std::get_if<MaskAction>(&action)) {
          cells.push_back(MaskValue(text, mask->keep_last, mask->fill));
        } else {
          cells.push_back(
              HashPseudonym(text, std::get<HashAction>(action).salt));
        }
      }
    }
    ColumnSpec out;
    out.name = column.name;
    out.kind = ColumnKind::kIdentifier;
    out.pii = true;
    schema.push_back(std::move(out));
    source.push_back(c);
    replaced.push_back(std::move(cells));
  }

  std::vector<Row> rows;
  rows.reserve(dataset.num_rows());
  for (std::size_t r = 0; r < dataset.num_rows(); ++r) {
    Row row;
    row.reserve(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      if (replaced[j].empty()) {
        row.push_back(dataset.rows()[r][source[j]]);
      } else {
        row.push_back(std::move(replaced[j][r]));
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset::Create(std::move(schema), std::move(rows), dataset.row_ids(),
                         "level1");
}

}  // namespace synthpriv
