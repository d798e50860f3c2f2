// Copyright 2026 The convbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable seeded randomness.
//
// The bit stream is xoshiro256** (Blackman & Vigna) with its state filled
// by splitmix64 from the 64-bit seed. Uniform doubles take the top 53 bits,
// offset by half an ulp so they lie strictly inside (0, 1). Normal variates
// use the Marsaglia polar method and consume uniforms in pairs, returning
// both members of each accepted pair in order. The only libm dependency is
// std::log; sqrt is correctly rounded under IEEE-754.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "convbound/tensor.hpp"

namespace convbound {

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Standard-normal sampler on top of Xoshiro256StarStar.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : bits_(seed) {}

  /// Uniform in the open interval (0, 1).
  double uniform();
  double normal();
  std::vector<double> normals(std::size_t count);

 private:
  Xoshiro256StarStar bits_;
  std::optional<double> spare_;
};

/// Filter with i.i.d. N(0, 1) entries, deterministic in (shape, seed).
Filter4D random_filter(const FilterShape& shape, std::uint64_t seed);

}  // namespace convbound
