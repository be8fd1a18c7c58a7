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

#ifndef SYNTHPRIV_RANDOM_H_
#define SYNTHPRIV_RANDOM_H_

#include <cstdint>
#include <limits>
#include <string_view>

namespace synthpriv {

// SplitMix64. Cheap to construct, so every (seed, column, row) cell can own
// an independent stream and results do not depend on evaluation order.
class BitStream {
 public:
  using result_type = std::uint64_t;

  explicit BitStream(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Hash-combines a seed with stream coordinates into a child seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a,
                      std::uint64_t b = 0, std::uint64_t c = 0);

// Labeled derivation: stage name -> child seed. Adding a new label never
// changes the seeds of existing labels.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

// Stream for cell (column, row) under `seed`.
inline BitStream CellStream(std::uint64_t seed, std::uint64_t column,
                            std::uint64_t row) {
  return BitStream(MixSeed(seed, column, row));
}

// Uniform double in the open interval (0, 1), 53 bits of resolution.
double UniformOpen(BitStream& rng);

// Uniform integer in [0, n), n > 0. Unbiased (rejection on the top range).
std::uint64_t UniformIndex(BitStream& rng, std::uint64_t n);

double SampleLaplace(BitStream& rng, double scale);

double SampleStandardNormal(BitStream& rng);

}  // namespace synthpriv

#endif  // SYNTHPRIV_RANDOM_H_
