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

// Explicit Jacobian of a circular convolution, for brute-force checks on
// small instances only.
//
// circ(v) has first row v and circ(v)[j][k] = v[(k - j) mod n]. For an
// n x n matrix A, circ(A) is n^2 x n^2 with block (j, k) = circ(A[(k-j) mod n, :]),
// i.e. circ(A)[j*n + r][k*n + s] = A[(k-j) mod n][(s-r) mod n].
// The Jacobian is the c_out x c_in grid of blocks circ(K[c, d, :, :]).

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "convbound/specnorm.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

/// Default cap on the number of entries of an explicit Jacobian (2^24).
inline constexpr std::size_t kDefaultJacobianCap = std::size_t{1} << 24;

DenseMatrix circ_vector(std::span<const double> v);

/// Throws ShapeError for non-square input.
DenseMatrix circ_matrix(const DenseMatrix& a);

struct JacobianMatrix {
  DenseMatrix matrix;
  std::size_t c_out = 0;
  std::size_t c_in = 0;
  std::size_t n = 0;
};

/// Number of entries the explicit Jacobian would hold, n^4 * c_out * c_in.
std::size_t jacobian_entries(const FilterShape& shape, std::size_t n);

/// Throws GeometryError unless n > max(h, w) and SizeCapError when the
/// Jacobian would hold more than `entry_cap` entries.
JacobianMatrix build_jacobian(const Filter4D& filter,
                              const InputGeometry& geometry,
                              std::size_t entry_cap = kDefaultJacobianCap);

SpectralEstimate oracle_sigma_max(const JacobianMatrix& jacobian,
                                  const PowerIterOptions& options = {});

/// For every Jacobian entry, the flat filter index it copies, or -1 for an
/// entry that is zero for every filter of this shape. Row-major like J.
std::vector<std::int64_t> jacobian_tie_map(const FilterShape& shape,
                                           const InputGeometry& geometry);

/// Writes J as comma separated rows.
void dump_jacobian_csv(const JacobianMatrix& jacobian,
                       const std::filesystem::path& path);

}  // namespace convbound
