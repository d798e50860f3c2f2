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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "convbound/bounds.hpp"
#include "convbound/error.hpp"
#include "convbound/exact_fft.hpp"
#include "convbound/random.hpp"
#include "test_support.hpp"

namespace convbound {
namespace {

using testing::naive_exact_norm;
using testing::rel_err;
using testing::singular_values;
using testing::svd_sigma_max;
using testing::to_eigen;

// sum_{a,b} w^{a j} L[c,d,a,b] w^{b k}, w = exp(-2 pi i / n), straight from
// the unpadded filter.
Complex naive_dft(const Filter4D& f, std::size_t n, std::size_t c, std::size_t d, std::size_t j,
                  std::size_t k) {
  Complex acc = 0.0;
  for (std::size_t a = 0; a < f.h(); ++a)
    for (std::size_t b = 0; b < f.w(); ++b) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(a * j + b * k) /
                           static_cast<double>(n);
      acc += f(c, d, a, b) * std::polar(1.0, angle);
    }
  return acc;
}

TEST(PadFilter, WorkedFilter) {
  const Filter4D f({1, 1, 1, 3}, {1, 2, -1});
  const auto k = pad_filter(f, InputGeometry(5));
  EXPECT_EQ(k.n(), 5u);
  ASSERT_EQ(k.values().size(), 25u);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t s = 0; s < 5; ++s) {
      const double expected = r == 0 ? std::vector<double>{1, 2, -1, 0, 0}[s] : 0.0;
      EXPECT_EQ(k(0, 0, r, s), expected);
    }
}

TEST(PadFilter, PointwiseFilterHasOneEntryPerChannelPair) {
  const auto f = random_filter({3, 2, 1, 1}, 4);
  const auto k = pad_filter(f, InputGeometry(4));
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t s = 0; s < 4; ++s)
          EXPECT_EQ(k(c, d, r, s), (r == 0 && s == 0) ? f(c, d, 0, 0) : 0.0);
}

TEST(PadFilter, InvariantOnRandomFilter) {
  const auto f = random_filter({2, 3, 2, 4}, 8);
  const auto k = pad_filter(f, InputGeometry(6));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t d = 0; d < 3; ++d)
      for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t s = 0; s < 6; ++s)
          EXPECT_EQ(k(c, d, r, s), (r < 2 && s < 4) ? f(c, d, r, s) : 0.0);
}

TEST(PadFilter, TooSmallInputIsGeometryError) {
  EXPECT_THROW(pad_filter(random_filter({1, 1, 4, 1}, 0), InputGeometry(3)), GeometryError);
  EXPECT_THROW(pad_filter(random_filter({1, 1, 3, 3}, 0), InputGeometry(3)), GeometryError);
  EXPECT_THROW(exact_norm_fft(random_filter({1, 1, 3, 3}, 0), InputGeometry(2)), GeometryError);
}

TEST(FourierMatrix, UnnormalizedRootsOfUnity) {
  const auto f = fourier_matrix(4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) {
      const Complex expected = std::polar(1.0, -std::numbers::pi * static_cast<double>(j * k) / 2.0);
      EXPECT_NEAR(std::abs(f(j, k) - expected), 0.0, 1e-15);
    }
  EXPECT_EQ(f(0, 0), Complex(1.0, 0.0));
}

TEST(FrequencyMatrices, DeltaHasConstantSpectrum) {
  const auto f = random_filter({3, 2, 1, 1}, 12);
  const auto set = frequency_matrices(pad_filter(f, InputGeometry(5)));
  ASSERT_EQ(set.matrices.size(), 25u);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t k = 0; k < 5; ++k)
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t d = 0; d < 2; ++d)
          EXPECT_NEAR(std::abs(set.at(j, k)(c, d) - f(c, d, 0, 0)), 0.0, 1e-15);
}

TEST(FrequencyMatrices, AllOnesSquare) {
  const Filter4D f({1, 1, 2, 2}, {1, 1, 1, 1});
  const auto set = frequency_matrices(pad_filter(f, InputGeometry(4)));
  EXPECT_NEAR(std::abs(set.at(0, 0)(0, 0) - Complex(4.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(set.at(2, 2)(0, 0)), 0.0, 1e-15);
  const Complex w = std::polar(1.0, -std::numbers::pi / 2.0);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) {
      const Complex expected = (1.0 + std::pow(w, static_cast<int>(j))) *
                               (1.0 + std::pow(w, static_cast<int>(k)));
      EXPECT_NEAR(std::abs(set.at(j, k)(0, 0) - expected), 0.0, 1e-14) << j << "," << k;
    }
}

TEST(FrequencyMatrices, MatchNaiveDft) {
  const auto f = random_filter({2, 3, 3, 3}, 21);
  const std::size_t n = 6;
  const auto set = frequency_matrices(pad_filter(f, InputGeometry(n)));
  ASSERT_EQ(set.n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const auto& g = set.at(j, k);
      ASSERT_EQ(g.rows(), 2u);
      ASSERT_EQ(g.cols(), 3u);
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t d = 0; d < 3; ++d)
          EXPECT_LE(std::abs(g(c, d) - naive_dft(f, n, c, d, j, k)), 1e-10);
    }
}

TEST(FrequencyMatrices, ConjugateSymmetry) {
  const auto f = random_filter({3, 2, 3, 2}, 33);
  for (std::size_t n : {4u, 5u}) {
    const auto set = frequency_matrices(pad_filter(f, InputGeometry(n)));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double a = singular_values(to_eigen(set.at(j, k)))(0);
        const double b = singular_values(to_eigen(set.at((n - j) % n, (n - k) % n)))(0);
        EXPECT_NEAR(a, b, 1e-10);
      }
  }
}

TEST(ExactNormFft, WorkedFilter) {
  EXPECT_NEAR(exact_norm_fft(Filter4D({1, 1, 1, 3}, {1, 2, -1}), InputGeometry(5)), 2.76008, 1e-4);
}

TEST(ExactNormFft, PointwiseFilterIsMatrixNorm) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = random_filter({2 + seed, 3, 1, 1}, seed);
    const DenseMatrix m(f.c_out(), f.c_in(), std::vector<double>(f.values().begin(), f.values().end()));
    EXPECT_LE(rel_err(exact_norm_fft(f, InputGeometry(3)), svd_sigma_max(to_eigen(m))), 1e-9);
  }
}

TEST(ExactNormFft, AllOnesSquare) {
  const auto r = exact_norm_fft_detailed(Filter4D({1, 1, 2, 2}, {1, 1, 1, 1}), InputGeometry(4));
  EXPECT_LE(rel_err(r.sigma, 4.0), 1e-12);
  EXPECT_EQ(r.peak_j, 0u);
  EXPECT_EQ(r.peak_k, 0u);
  EXPECT_TRUE(r.all_converged);
}

TEST(ExactNormFft, MatchesExplicitJacobian) {
  const FilterShape shapes[] = {{1, 1, 3, 3}, {2, 3, 3, 3}, {3, 2, 2, 1}, {3, 3, 1, 4}};
  for (const auto& shape : shapes) {
    for (std::size_t n : {5u, 8u}) {
      const auto f = random_filter(shape, n * 10 + shape.c_out);
      const double fft = exact_norm_fft(f, InputGeometry(n));
      EXPECT_LE(rel_err(fft, naive_exact_norm(f, n)), 1e-8) << shape.to_string() << " n " << n;
    }
  }
}

TEST(ExactNormFft, NeverExceedsBound) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto f = random_filter({3, 2, 3, 3}, 70 + seed);
    const double bound = compute_bound(f).bound;
    for (std::size_t n : {4u, 6u, 9u, 16u}) {
      EXPECT_LE(exact_norm_fft(f, InputGeometry(n)), bound + 1e-6 * bound);
    }
  }
}

TEST(ExactNormFft, WorkerCountDoesNotChangeResult) {
  const auto f = random_filter({4, 4, 3, 3}, 5);
  const double one = exact_norm_fft(f, InputGeometry(8), {}, 1);
  EXPECT_EQ(exact_norm_fft(f, InputGeometry(8), {}, 3), one);
  EXPECT_EQ(exact_norm_fft(f, InputGeometry(8), {}, 0), one);
}

}  // namespace
}  // namespace convbound
