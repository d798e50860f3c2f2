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

// Reshape bounds on the spectral norm of a circular convolution.
//
// For a filter L of shape c_out x c_in x h x w, four block matrices are
// formed from the c_out x c_in slices L[:, :, k, l]:
//
//   R  (c_out*h x c_in*w)   block (k, l) = L[:, :, k, l]
//   S  (c_out*w x c_in*h)   block (l, k) = L[:, :, k, l]
//   T  (c_out   x c_in*h*w) blocks side by side in row-major (k, l) order
//   U  (c_out*h*w x c_in)   blocks stacked in row-major (k, l) order
//
// For every input size n > max(h, w), the Jacobian J of the layer satisfies
//
//   |J|_2 <= sqrt(h*w) * min(|R|_2, |S|_2, |T|_2, |U|_2)
//
// and the right-hand side never looks at n. With h = w = 1 all four
// matrices equal L[:, :, 0, 0] and the bound is exact.

#pragma once

#include <array>
#include <string_view>

#include "convbound/specnorm.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

/// Which reshape realises a bound. Declaration order is the tie-break order.
enum class Reshape { kR = 0, kS = 1, kT = 2, kU = 3 };

inline constexpr std::array<Reshape, 4> kAllReshapes = {
    Reshape::kR, Reshape::kS, Reshape::kT, Reshape::kU};

std::string_view reshape_name(Reshape which);
Reshape parse_reshape(std::string_view name);

struct MatrixIndex {
  std::size_t row;
  std::size_t col;
};

/// Shape of the reshape matrix for a filter shape.
MatrixIndex reshape_dims(Reshape which, const FilterShape& shape);

/// Position of filter entry (c, d, k, l) inside the reshape matrix. The map
/// is a bijection between filter entries and matrix entries.
MatrixIndex reshape_index(Reshape which, const FilterShape& shape,
                          std::size_t c, std::size_t d, std::size_t k,
                          std::size_t l);

DenseMatrix build_reshape(Reshape which, const Filter4D& filter);
DenseMatrix build_R(const Filter4D& filter);
DenseMatrix build_S(const Filter4D& filter);
DenseMatrix build_T(const Filter4D& filter);
DenseMatrix build_U(const Filter4D& filter);

/// Pulls a matrix shaped like build_reshape(which, .) back onto the filter
/// layout. Inverse of build_reshape.
Filter4D unreshape(Reshape which, const FilterShape& shape,
                   const DenseMatrix& m);

struct BoundReport {
  std::array<double, 4> norms{};  // |R|_2, |S|_2, |T|_2, |U|_2
  double scale = 1.0;             // sqrt(h*w)
  double bound = 0.0;             // scale * min(norms)
  Reshape argmin = Reshape::kR;
  std::array<SpectralEstimate, 4> estimates;

  double norm(Reshape which) const { return norms[static_cast<int>(which)]; }
  double scaled_norm(Reshape which) const { return scale * norm(which); }
  const SpectralEstimate& estimate(Reshape which) const {
    return estimates[static_cast<int>(which)];
  }
  bool all_converged() const;
};

/// Smallest index wins among exactly equal norms.
Reshape argmin_reshape(const std::array<double, 4>& norms);

/// Assembles a report from four estimates ordered R, S, T, U.
BoundReport make_bound_report(const FilterShape& shape,
                              std::array<SpectralEstimate, 4> estimates);

/// Computes all four norms with spectral_norm. Input size is deliberately
/// not a parameter.
BoundReport compute_bound(const Filter4D& filter,
                          const PowerIterOptions& options = {});

}  // namespace convbound
