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

#ifndef SYNTHPRIV_REFERENCE_DATA_H_
#define SYNTHPRIV_REFERENCE_DATA_H_

#include <cstddef>
#include <cstdint>

#include "synthpriv/dataset.h"

namespace synthpriv {

inline constexpr std::uint64_t kReferenceSeed = 20240917;
inline constexpr std::size_t kReferenceRows = 2000;

// customer_id (identifier, SSN-shaped), age (integer, [18, 90]), income and
// balance (continuous), region (4 categories), risk_tier (3 categories,
// driven by the other columns).
Schema ReferenceSchema();

// Fixed seeded recipe; the same (seed, n) always yields the same dataset.
Dataset ReferenceDataset(std::uint64_t seed = kReferenceSeed,
                         std::size_t n = kReferenceRows);

}  // namespace synthpriv

#endif  // SYNTHPRIV_REFERENCE_DATA_H_
