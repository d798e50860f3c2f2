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

#include "convbound/exact_fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "convbound/parallel.hpp"

namespace convbound {

namespace {

// Holds F and the half transform Q[c][d][a][k] = sum_b K[c,d,a,b] F[b][k]
// over the h nonzero rows a of every padded slice. Rows a >= h and columns
// b >= w of K are zero and skipped.
class SliceTransform {
 public:
  explicit SliceTransform(const PaddedFilter& padded)
      : c_out_(padded.base().c_out()),
        c_in_(padded.base().c_in()),
        h_(padded.base().h()),
        n_(padded.n()),
        fourier_(fourier_matrix(n_)),
        half_(c_out_ * c_in_ * h_ * n_) {
    const std::size_t w = padded.base().w();
    for (std::size_t c = 0; c < c_out_; ++c) {
      for (std::size_t d = 0; d < c_in_; ++d) {
        for (std::size_t a = 0; a < h_; ++a) {
          Complex* row = &half_[((c * c_in_ + d) * h_ + a) * n_];
          for (std::size_t b = 0; b < w; ++b) {
            const double kab = padded(c, d, a, b);
            if (kab == 0.0) continue;
            for (std::size_t k = 0; k < n_; ++k) row[k] += kab * fourier_(b, k);
          }
        }
      }
    }
  }

  ComplexMatrix at(std::size_t j, std::size_t k) const {
    std::vector<Complex> g(c_out_ * c_in_);
    for (std::size_t cd = 0; cd < c_out_ * c_in_; ++cd) {
      Complex acc{};
      const Complex* q = &half_[cd * h_ * n_];
      for (std::size_t a = 0; a < h_; ++a) acc += fourier_(a, j) * q[a * n_ + k];
      g[cd] = acc;
    }
    return ComplexMatrix(c_out_, c_in_, std::move(g));
  }

 private:
  std::size_t c_out_, c_in_, h_, n_;
  ComplexMatrix fourier_;
  std::vector<Complex> half_;
};

}  // namespace

PaddedFilter::PaddedFilter(const Filter4D& base, const InputGeometry& geometry)
    : base_(base), n_(geometry.n()) {
  geometry.require_fits(base.shape());
  values_.assign(base.c_out() * base.c_in() * n_ * n_, 0.0);
  for (std::size_t c = 0; c < base.c_out(); ++c) {
    for (std::size_t d = 0; d < base.c_in(); ++d) {
      for (std::size_t k = 0; k < base.h(); ++k) {
        for (std::size_t l = 0; l < base.w(); ++l) {
          values_[((c * base.c_in() + d) * n_ + k) * n_ + l] = base(c, d, k, l);
        }
      }
    }
  }
}

PaddedFilter pad_filter(const Filter4D& filter, const InputGeometry& geometry) {
  return PaddedFilter(filter, geometry);
}

ComplexMatrix fourier_matrix(std::size_t n) {
  std::vector<Complex> f(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>((j * k) % n) /
                           static_cast<double>(n);
      f[j * n + k] = Complex(std::cos(angle), std::sin(angle));
    }
  }
  return ComplexMatrix(n, n, std::move(f));
}

FrequencyMatrixSet frequency_matrices(const PaddedFilter& padded) {
  const SliceTransform transform(padded);
  FrequencyMatrixSet set;
  set.n = padded.n();
  set.matrices.reserve(set.n * set.n);
  for (std::size_t j = 0; j < set.n; ++j) {
    for (std::size_t k = 0; k < set.n; ++k) {
      set.matrices.push_back(transform.at(j, k));
    }
  }
  return set;
}

ExactFftResult exact_norm_fft_detailed(const Filter4D& filter,
                                       const InputGeometry& geometry,
                                       const PowerIterOptions& options,
                                       std::size_t workers) {
  const PaddedFilter padded(filter, geometry);
  const SliceTransform transform(padded);
  const std::size_t n = geometry.n();
  std::vector<ComplexSpectralEstimate> estimates(n * n);
  parallel_for(
      n * n,
      [&](std::size_t idx) {
        estimates[idx] = spectral_norm(transform.at(idx / n, idx % n), options);
      },
      workers);

  ExactFftResult result;
  std::size_t peak = 0;
  for (std::size_t idx = 0; idx < estimates.size(); ++idx) {
    if (estimates[idx].sigma > estimates[peak].sigma) peak = idx;
    result.all_converged = result.all_converged && estimates[idx].converged;
    result.max_iterations = std::max(result.max_iterations, estimates[idx].iterations);
  }
  result.sigma = estimates[peak].sigma;
  result.peak_j = peak / n;
  result.peak_k = peak % n;
  return result;
}

double exact_norm_fft(const Filter4D& filter, const InputGeometry& geometry,
                      const PowerIterOptions& options, std::size_t workers) {
  return exact_norm_fft_detailed(filter, geometry, options, workers).sigma;
}

}  // namespace convbound
