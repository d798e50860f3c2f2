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

#include "convbound/random.hpp"

#include <cmath>

namespace convbound {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double NormalSampler::uniform() {
  return (static_cast<double>(bits_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalSampler::normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  for (;;) {
    const double a = 2.0 * uniform() - 1.0;
    const double b = 2.0 * uniform() - 1.0;
    const double r2 = a * a + b * b;
    if (r2 >= 1.0 || r2 == 0.0) continue;
    const double factor = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = b * factor;
    return a * factor;
  }
}

std::vector<double> NormalSampler::normals(std::size_t count) {
  std::vector<double> out(count);
  for (auto& x : out) x = normal();
  return out;
}

Filter4D random_filter(const FilterShape& shape, std::uint64_t seed) {
  NormalSampler sampler(seed);
  return Filter4D(shape, sampler.normals(shape.size()));
}

}  // namespace convbound
