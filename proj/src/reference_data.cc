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

#include "synthpriv/reference_data.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "absl/strings/str_format.h"
#include "synthpriv/random.h"

namespace synthpriv {
namespace {

double Cents(double v) { return std::round(v * 100.0) / 100.0; }

int Weighted(BitStream& rng, std::initializer_list<double> weights) {
  double u = UniformOpen(rng);
  int k = 0;
  for (double w : weights) {
    if (u < w) return k;
    u -= w;
    ++k;
  }
  return k - 1;
}

}  // namespace

Schema ReferenceSchema() {
  return {
      {"customer_id", ColumnKind::kIdentifier, true, std::nullopt, {}},
      {"age", ColumnKind::kInteger, false, Bounds{18, 90}, {}},
      {"income", ColumnKind::kContinuous, false, Bounds{0, 1e6}, {}},
      {"balance", ColumnKind::kContinuous, false, Bounds{0, 2e6}, {}},
      {"region", ColumnKind::kCategorical, false, std::nullopt,
       {"North", "South", "East", "West"}},
      {"risk_tier", ColumnKind::kCategorical, false, std::nullopt,
       {"low", "medium", "high"}},
  };
}

Dataset ReferenceDataset(std::uint64_t seed, std::size_t n) {
  std::vector<Row> rows;
  rows.reserve(n);
  std::unordered_set<std::string> used_ids;
  for (std::size_t i = 0; i < n; ++i) {
    BitStream rng(MixSeed(seed, i, 0x4ef));
    std::string id;
    do {
      id = absl::StrFormat("%03d-%02d-%04d", 100 + UniformIndex(rng, 800),
                           10 + UniformIndex(rng, 90), UniformIndex(rng, 10000));
    } while (!used_ids.insert(id).second);

    const double age = std::clamp(
        std::round(44.0 + 13.0 * SampleStandardNormal(rng)), 18.0, 90.0);
    const double income = std::clamp(
        Cents(std::exp(10.6 + 0.012 * (age - 44.0) +
                       0.45 * SampleStandardNormal(rng))),
        0.0, 1e6);
    const double balance = std::clamp(
        Cents(income * std::exp(-1.6 + 0.6 * SampleStandardNormal(rng))), 0.0,
        2e6);
    const int region = Weighted(rng, {0.35, 0.25, 0.25, 0.15});

    // Risk falls with income and age, rises with leverage, and carries a
    // regional offset plus idiosyncratic noise.
    const double score = -1.1 * (std::log(income) - 10.6) / 0.45 -
                         0.03 * (age - 44.0) +
                         0.9 * (std::log(balance / income) + 1.6) / 0.6 +
                         (region == 3 ? 0.6 : 0.0) +
                         0.7 * SampleStandardNormal(rng);
    const int tier = score < -0.8 ? 0 : (score < 0.9 ? 1 : 2);

    rows.push_back({Cell(std::move(id)), Cell(age), Cell(income),
                    Cell(balance), Cell(region), Cell(tier)});
  }
  auto dataset = Dataset::Create(
      ReferenceSchema(), std::move(rows),
      absl::StrFormat("reference(seed=%d,n=%d)", seed, n));
  // The recipe only produces in-schema values.
  return *std::move(dataset);
}

}  // namespace synthpriv
