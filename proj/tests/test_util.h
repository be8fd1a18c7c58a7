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

#ifndef SYNTHPRIV_TESTS_TEST_UTIL_H_
#define SYNTHPRIV_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "synthpriv/dataset.h"
#include "synthpriv/random.h"

#define SP_ASSERT_OK(expr)                                  \
  do {                                                      \
    const absl::Status sp_status_ = (expr);                 \
    ASSERT_TRUE(sp_status_.ok()) << sp_status_.ToString();  \
  } while (0)

#define SP_EXPECT_OK(expr)                                  \
  do {                                                      \
    const absl::Status sp_status_ = (expr);                 \
    EXPECT_TRUE(sp_status_.ok()) << sp_status_.ToString();  \
  } while (0)

#define SP_CONCAT_INNER(a, b) a##b
#define SP_CONCAT(a, b) SP_CONCAT_INNER(a, b)
#define SP_ASSERT_OK_AND_ASSIGN(lhs, expr) \
  SP_ASSERT_OK_AND_ASSIGN_IMPL(SP_CONCAT(sp_or_, __LINE__), lhs, expr)
#define SP_ASSERT_OK_AND_ASSIGN_IMPL(tmp, lhs, expr)        \
  auto tmp = (expr);                                        \
  ASSERT_TRUE(tmp.ok()) << tmp.status().ToString();         \
  lhs = std::move(tmp).value()

namespace synthpriv::testing {

inline ColumnSpec Numeric(std::string name, double lo, double hi) {
  ColumnSpec c;
  c.name = std::move(name);
  c.kind = ColumnKind::kContinuous;
  c.bounds = Bounds{lo, hi};
  return c;
}

inline ColumnSpec Unbounded(std::string name) {
  ColumnSpec c;
  c.name = std::move(name);
  c.kind = ColumnKind::kContinuous;
  return c;
}

inline ColumnSpec Integer(std::string name, double lo, double hi) {
  ColumnSpec c = Numeric(std::move(name), lo, hi);
  c.kind = ColumnKind::kInteger;
  return c;
}

inline ColumnSpec Categorical(std::string name,
                              std::vector<std::string> categories) {
  ColumnSpec c;
  c.name = std::move(name);
  c.kind = ColumnKind::kCategorical;
  c.categories = std::move(categories);
  return c;
}

inline ColumnSpec Identifier(std::string name) {
  ColumnSpec c;
  c.name = std::move(name);
  c.kind = ColumnKind::kIdentifier;
  c.pii = true;
  return c;
}

inline Dataset MustCreate(Schema schema, std::vector<Row> rows,
                          std::string provenance = "test") {
  auto d = Dataset::Create(std::move(schema), std::move(rows),
                           std::move(provenance));
  if (!d.ok()) {
    ADD_FAILURE() << d.status().ToString();
    std::abort();
  }
  return *std::move(d);
}

// Rows with two correlated numerics, one categorical and an identifier,
// drawn from a fixed recipe. The first row index is `offset` so that two
// calls with different offsets give disjoint, identically distributed sets.
inline Dataset MixedPopulation(std::size_t n, std::uint64_t seed,
                               std::size_t offset = 0) {
  Schema schema = {Identifier("id"), Numeric("x", -10, 10),
                   Numeric("y", -20, 20), Categorical("g", {"a", "b", "c"})};
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    BitStream rng(MixSeed(seed, offset + i, 77));
    const double x = std::clamp(2.0 * SampleStandardNormal(rng), -10.0, 10.0);
    const double y =
        std::clamp(x + 1.5 * SampleStandardNormal(rng), -20.0, 20.0);
    const int g = static_cast<int>(UniformIndex(rng, 3));
    rows.push_back({Cell(std::string("P") + std::to_string(offset + i)),
                    Cell(x), Cell(y), Cell(g)});
  }
  return MustCreate(std::move(schema), std::move(rows), "population");
}

inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("synthpriv_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace synthpriv::testing

#endif  // SYNTHPRIV_TESTS_TEST_UTIL_H_
