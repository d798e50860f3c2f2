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

#include "convbound/oracle.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <string>

#include "convbound/error.hpp"
#include "convbound/exact_fft.hpp"

namespace convbound {

DenseMatrix circ_vector(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) out[j * n + k] = v[(k + n - j) % n];
  }
  return DenseMatrix(n, n, std::move(out));
}

DenseMatrix circ_matrix(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("circ_matrix needs a square matrix");
  const std::size_t n = a.rows();
  const std::size_t nn = n * n;
  std::vector<double> out(nn * nn);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t source_row = (k + n - j) % n;
      const auto block = circ_vector(a.values().subspan(source_row * n, n));
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          out[(j * n + r) * nn + k * n + s] = block(r, s);
        }
      }
    }
  }
  return DenseMatrix(nn, nn, std::move(out));
}

std::size_t jacobian_entries(const FilterShape& shape, std::size_t n) {
  const std::size_t nn = n * n;
  const long double entries = static_cast<long double>(nn) * nn * shape.c_out * shape.c_in;
  if (entries > static_cast<long double>(std::numeric_limits<std::size_t>::max())) {
    return std::numeric_limits<std::size_t>::max();
  }
  return nn * nn * shape.c_out * shape.c_in;
}

JacobianMatrix build_jacobian(const Filter4D& filter,
                              const InputGeometry& geometry,
                              std::size_t entry_cap) {
  geometry.require_fits(filter.shape());
  const std::size_t entries = jacobian_entries(filter.shape(), geometry.n());
  if (entries > entry_cap) {
    throw SizeCapError("explicit Jacobian for " + filter.shape().to_string() +
                       " at n=" + std::to_string(geometry.n()) + " needs " +
                       std::to_string(entries) + " entries (cap " +
                       std::to_string(entry_cap) +
                       "); use the matrix-free or frequency method");
  }
  const PaddedFilter padded(filter, geometry);
  const std::size_t n = geometry.n();
  const std::size_t nn = n * n;
  const std::size_t cols = filter.c_in() * nn;
  std::vector<double> out(filter.c_out() * nn * cols);
  for (std::size_t c = 0; c < filter.c_out(); ++c) {
    for (std::size_t d = 0; d < filter.c_in(); ++d) {
      const std::size_t offset = ((c * filter.c_in() + d) * n) * n;
      const DenseMatrix slice(
          n, n,
          std::vector<double>(padded.values().begin() + offset,
                              padded.values().begin() + offset + nn));
      const auto block = circ_matrix(slice);
      for (std::size_t p = 0; p < nn; ++p) {
        for (std::size_t q = 0; q < nn; ++q) {
          out[(c * nn + p) * cols + d * nn + q] = block(p, q);
        }
      }
    }
  }
  return JacobianMatrix{DenseMatrix(filter.c_out() * nn, cols, std::move(out)),
                        filter.c_out(), filter.c_in(), n};
}

SpectralEstimate oracle_sigma_max(const JacobianMatrix& jacobian,
                                  const PowerIterOptions& options) {
  return spectral_norm(jacobian.matrix, options);
}

std::vector<std::int64_t> jacobian_tie_map(const FilterShape& shape,
                                           const InputGeometry& geometry) {
  geometry.require_fits(shape);
  const std::size_t n = geometry.n();
  const std::size_t nn = n * n;
  const std::size_t cols = shape.c_in * nn;
  std::vector<std::int64_t> map(shape.c_out * nn * cols, -1);
  for (std::size_t c = 0; c < shape.c_out; ++c) {
    for (std::size_t d = 0; d < shape.c_in; ++d) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t s = 0; s < n; ++s) {
              const std::size_t dk = (k + n - j) % n;
              const std::size_t dl = (s + n - r) % n;
              if (dk >= shape.h || dl >= shape.w) continue;
              const std::size_t row = c * nn + j * n + r;
              const std::size_t col = d * nn + k * n + s;
              map[row * cols + col] = static_cast<std::int64_t>(
                  ((c * shape.c_in + d) * shape.h + dk) * shape.w + dl);
            }
          }
        }
      }
    }
  }
  return map;
}

void dump_jacobian_csv(const JacobianMatrix& jacobian,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  const auto& m = jacobian.matrix;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace convbound
