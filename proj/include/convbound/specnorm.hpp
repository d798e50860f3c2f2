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

// Largest singular value by power iteration.
//
// Each iteration applies the operator and its adjoint once:
//
//   u <- M v / |M v|,   v <- M^H u / |M^H u|,   sigma <- |M^H u|
//
// The loop stops when the relative change of sigma between two iterations
// is <= tol and the residual |M v - sigma u| is <= tol * sigma. Because the
// sigma error is quadratic in the singular-vector error, a residual of tol
// leaves sigma accurate to roughly tol^2 relative.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "convbound/tensor.hpp"

namespace convbound {

struct PowerIterOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
};

template <class Scalar>
struct BasicSpectralEstimate {
  double sigma = 0.0;
  std::vector<Scalar> u;  // unit left singular vector
  std::vector<Scalar> v;  // unit right singular vector
  std::size_t iterations = 0;
  bool converged = false;
  // max(|M v - sigma u|, |M^H u - sigma v|); the second term vanishes up to
  // rounding whenever v was produced from u, which is the usual orientation.
  double residual = 0.0;
};

using SpectralEstimate = BasicSpectralEstimate<double>;
using ComplexSpectralEstimate = BasicSpectralEstimate<Complex>;

/// y = op(x). Output spans are pre-sized by the caller.
template <class Scalar>
using LinearMap = std::function<void(std::span<const Scalar>, std::span<Scalar>)>;

/// A matrix-free operator of shape rows x cols with its adjoint.
template <class Scalar>
struct LinearOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  LinearMap<Scalar> apply;
  LinearMap<Scalar> apply_adjoint;
};

/// Seeded random unit vector with i.i.d. normal components.
std::vector<double> random_unit_vector(std::size_t length, std::uint64_t seed);
std::vector<Complex> random_complex_unit_vector(std::size_t length,
                                                std::uint64_t seed);

/// Zero operators return sigma = 0, converged = true. Tall matrices are
/// iterated through their transpose so that M and M^T yield bit-identical
/// sigma. Throws PreconditionError for tol <= 0.
SpectralEstimate spectral_norm(const DenseMatrix& m,
                               const PowerIterOptions& options = {});
ComplexSpectralEstimate spectral_norm(const ComplexMatrix& m,
                                      const PowerIterOptions& options = {});
SpectralEstimate spectral_norm(const LinearOperator<double>& op,
                               const PowerIterOptions& options = {});

/// Singular-vector pair persisted between warm-started calls.
struct PowerIterState {
  std::vector<double> u;
  std::vector<double> v;
  double sigma_last = 0.0;

  static PowerIterState random(std::size_t rows, std::size_t cols,
                               std::uint64_t seed);
  static PowerIterState from_estimate(const SpectralEstimate& est);
};

struct WarmStepResult {
  double sigma = 0.0;
  PowerIterState state;
};

/// Exactly one u/v update pair from `state`. Throws ShapeError if the state
/// does not match M.
WarmStepResult warm_step(const DenseMatrix& m, const PowerIterState& state);

/// u v^T, the gradient of sigma with respect to the entries of M. Requires a
/// converged estimate (PreconditionError otherwise). When the top singular
/// value is repeated this is one element of the subdifferential.
DenseMatrix grad_sigma_wrt_matrix(const SpectralEstimate& est);

/// sigma_2 estimated by power iteration on M - sigma_1 u v^T.
double second_singular_value(const DenseMatrix& m, const SpectralEstimate& top,
                             const PowerIterOptions& options = {});

/// |M v - sigma u| for explicit vectors.
double singular_residual(const DenseMatrix& m, std::span<const double> u,
                         std::span<const double> v, double sigma);

}  // namespace convbound
