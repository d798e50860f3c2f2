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

#include "convbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convbound/error.hpp"

namespace convbound {

std::string_view reshape_name(Reshape which) {
  switch (which) {
    case Reshape::kR: return "R";
    case Reshape::kS: return "S";
    case Reshape::kT: return "T";
    case Reshape::kU: return "U";
  }
  return "?";
}

Reshape parse_reshape(std::string_view name) {
  for (Reshape r : kAllReshapes) {
    if (reshape_name(r) == name) return r;
  }
  throw FormatError("unknown reshape '" + std::string(name) + "'");
}

MatrixIndex reshape_dims(Reshape which, const FilterShape& s) {
  switch (which) {
    case Reshape::kR: return {s.c_out * s.h, s.c_in * s.w};
    case Reshape::kS: return {s.c_out * s.w, s.c_in * s.h};
    case Reshape::kT: return {s.c_out, s.c_in * s.h * s.w};
    case Reshape::kU: return {s.c_out * s.h * s.w, s.c_in};
  }
  return {0, 0};
}

MatrixIndex reshape_index(Reshape which, const FilterShape& s, std::size_t c,
                          std::size_t d, std::size_t k, std::size_t l) {
  switch (which) {
    case Reshape::kR: return {k * s.c_out + c, l * s.c_in + d};
    case Reshape::kS: return {l * s.c_out + c, k * s.c_in + d};
    case Reshape::kT: return {c, (k * s.w + l) * s.c_in + d};
    case Reshape::kU: return {(k * s.w + l) * s.c_out + c, d};
  }
  return {0, 0};
}

DenseMatrix build_reshape(Reshape which, const Filter4D& filter) {
  const auto& s = filter.shape();
  const auto dims = reshape_dims(which, s);
  std::vector<double> out(dims.row * dims.col);
  for (std::size_t c = 0; c < s.c_out; ++c) {
    for (std::size_t d = 0; d < s.c_in; ++d) {
      for (std::size_t k = 0; k < s.h; ++k) {
        for (std::size_t l = 0; l < s.w; ++l) {
          const auto at = reshape_index(which, s, c, d, k, l);
          out[at.row * dims.col + at.col] = filter(c, d, k, l);
        }
      }
    }
  }
  return DenseMatrix(dims.row, dims.col, std::move(out));
}

DenseMatrix build_R(const Filter4D& filter) { return build_reshape(Reshape::kR, filter); }
DenseMatrix build_S(const Filter4D& filter) { return build_reshape(Reshape::kS, filter); }
DenseMatrix build_T(const Filter4D& filter) { return build_reshape(Reshape::kT, filter); }
DenseMatrix build_U(const Filter4D& filter) { return build_reshape(Reshape::kU, filter); }

Filter4D unreshape(Reshape which, const FilterShape& s, const DenseMatrix& m) {
  const auto dims = reshape_dims(which, s);
  if (m.rows() != dims.row || m.cols() != dims.col) {
    throw ShapeError("matrix does not match reshape " +
                     std::string(reshape_name(which)) + " of " + s.to_string());
  }
  std::vector<double> out(s.size());
  std::size_t flat = 0;
  for (std::size_t c = 0; c < s.c_out; ++c) {
    for (std::size_t d = 0; d < s.c_in; ++d) {
      for (std::size_t k = 0; k < s.h; ++k) {
        for (std::size_t l = 0; l < s.w; ++l) {
          const auto at = reshape_index(which, s, c, d, k, l);
          out[flat++] = m(at.row, at.col);
        }
      }
    }
  }
  return Filter4D(s, std::move(out));
}

bool BoundReport::all_converged() const {
  return std::all_of(estimates.begin(), estimates.end(),
                     [](const auto& e) { return e.converged; });
}

Reshape argmin_reshape(const std::array<double, 4>& norms) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < norms.size(); ++i) {
    if (norms[i] < norms[best]) best = i;
  }
  return static_cast<Reshape>(best);
}

BoundReport make_bound_report(const FilterShape& shape,
                              std::array<SpectralEstimate, 4> estimates) {
  BoundReport report;
  report.scale = std::sqrt(static_cast<double>(shape.h * shape.w));
  for (std::size_t i = 0; i < 4; ++i) report.norms[i] = estimates[i].sigma;
  report.argmin = argmin_reshape(report.norms);
  report.bound = report.scale * report.norm(report.argmin);
  report.estimates = std::move(estimates);
  return report;
}

BoundReport compute_bound(const Filter4D& filter,
                          const PowerIterOptions& options) {
  std::array<SpectralEstimate, 4> estimates;
  for (Reshape r : kAllReshapes) {
    estimates[static_cast<int>(r)] =
        spectral_norm(build_reshape(r, filter), options);
  }
  return make_bound_report(filter.shape(), std::move(estimates));
}

}  // namespace convbound
