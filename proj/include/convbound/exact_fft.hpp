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

// Exact spectral norm of a circular convolution in the frequency domain.
//
// Zero-pad L to K (c_out x c_in x n x n). With the unnormalised Fourier
// matrix F[j][k] = w^(j*k), w = exp(-2*pi*i/n), define for every frequency
// (j, k) the c_out x c_in matrix
//
//   G(j,k)[c][d] = (F^T K[c, d, :, :] F)[j][k].
//
// The singular values of the layer Jacobian are the union of the singular
// values of all n^2 matrices G(j,k), so |J|_2 = max_(j,k) sigma_max(G(j,k)).
// The transforms are direct matrix products; no fast Fourier transform.

#pragma once

#include <cstddef>
#include <vector>

#include "convbound/specnorm.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

/// L zero-padded to c_out x c_in x n x n.
class PaddedFilter {
 public:
  PaddedFilter(const Filter4D& base, const InputGeometry& geometry);

  const Filter4D& base() const { return base_; }
  std::size_t n() const { return n_; }
  double operator()(std::size_t c, std::size_t d, std::size_t k,
                    std::size_t l) const {
    return values_[((c * base_.c_in() + d) * n_ + k) * n_ + l];
  }
  std::span<const double> values() const { return values_; }

 private:
  Filter4D base_;
  std::size_t n_;
  std::vector<double> values_;
};

/// Throws GeometryError unless n > max(h, w).
PaddedFilter pad_filter(const Filter4D& filter, const InputGeometry& geometry);

/// F[j][k] = exp(-2*pi*i*(j*k mod n)/n), row-major n x n.
ComplexMatrix fourier_matrix(std::size_t n);

struct FrequencyMatrixSet {
  std::size_t n = 0;
  std::vector<ComplexMatrix> matrices;  // n*n entries, (j, k) row-major

  const ComplexMatrix& at(std::size_t j, std::size_t k) const {
    return matrices[j * n + k];
  }
};

FrequencyMatrixSet frequency_matrices(const PaddedFilter& padded);

struct ExactFftResult {
  double sigma = 0.0;
  std::size_t peak_j = 0;  // frequency attaining the max
  std::size_t peak_k = 0;
  bool all_converged = true;
  std::size_t max_iterations = 0;  // worst case over the n^2 power iterations
};

/// max over frequencies of sigma_max(G(j,k)). Frequencies are processed in
/// parallel (workers == 0 picks default_workers()); the reduction is an
/// exact max, so the result does not depend on the worker count.
ExactFftResult exact_norm_fft_detailed(const Filter4D& filter,
                                       const InputGeometry& geometry,
                                       const PowerIterOptions& options = {},
                                       std::size_t workers = 0);

double exact_norm_fft(const Filter4D& filter, const InputGeometry& geometry,
                      const PowerIterOptions& options = {},
                      std::size_t workers = 0);

}  // namespace convbound
