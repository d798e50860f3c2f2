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

#include "convbound/conv.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "convbound/error.hpp"

namespace convbound {

namespace {

void forward_into(const Filter4D& f, std::size_t n, std::span<const double> x,
                  std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  const std::size_t nn = n * n;
  for (std::size_t c = 0; c < f.c_out(); ++c) {
    double* yc = y.data() + c * nn;
    for (std::size_t d = 0; d < f.c_in(); ++d) {
      const double* xd = x.data() + d * nn;
      for (std::size_t k = 0; k < f.h(); ++k) {
        for (std::size_t l = 0; l < f.w(); ++l) {
          const double weight = f(c, d, k, l);
          if (weight == 0.0) continue;
          for (std::size_t r = 0; r < n; ++r) {
            const double* xrow = xd + ((r + k) % n) * n;
            double* yrow = yc + r * n;
            for (std::size_t s = 0; s < n; ++s) yrow[s] += weight * xrow[(s + l) % n];
          }
        }
      }
    }
  }
}

// X[d][p][q] = sum_c sum_k sum_l Y[c][(p-k) mod n][(q-l) mod n] * L[c,d,k,l]
void adjoint_into(const Filter4D& f, std::size_t n, std::span<const double> y,
                  std::span<double> x) {
  std::fill(x.begin(), x.end(), 0.0);
  const std::size_t nn = n * n;
  for (std::size_t c = 0; c < f.c_out(); ++c) {
    const double* yc = y.data() + c * nn;
    for (std::size_t d = 0; d < f.c_in(); ++d) {
      double* xd = x.data() + d * nn;
      for (std::size_t k = 0; k < f.h(); ++k) {
        for (std::size_t l = 0; l < f.w(); ++l) {
          const double weight = f(c, d, k, l);
          if (weight == 0.0) continue;
          for (std::size_t r = 0; r < n; ++r) {
            const double* yrow = yc + r * n;
            double* xrow = xd + ((r + k) % n) * n;
            for (std::size_t s = 0; s < n; ++s) xrow[(s + l) % n] += weight * yrow[s];
          }
        }
      }
    }
  }
}

void check_image(const ImageTensor& img, std::size_t channels,
                 const InputGeometry& g, const char* what) {
  if (img.channels() != channels || img.n() != g.n()) {
    throw ShapeError(std::string(what) + " is " + std::to_string(img.channels()) +
                     "x" + std::to_string(img.n()) + "x" + std::to_string(img.n()) +
                     ", expected " + std::to_string(channels) + "x" +
                     std::to_string(g.n()) + "x" + std::to_string(g.n()));
  }
}

}  // namespace

ImageTensor conv_forward(const Filter4D& filter, const ImageTensor& x,
                         const InputGeometry& geometry) {
  geometry.require_fits(filter.shape());
  check_image(x, filter.c_in(), geometry, "input");
  const std::size_t n = geometry.n();
  std::vector<double> y(filter.c_out() * n * n);
  forward_into(filter, n, x.values(), y);
  return ImageTensor(filter.c_out(), n, std::move(y));
}

ImageTensor conv_adjoint(const Filter4D& filter, const ImageTensor& y,
                         const InputGeometry& geometry) {
  geometry.require_fits(filter.shape());
  check_image(y, filter.c_out(), geometry, "output-side image");
  const std::size_t n = geometry.n();
  std::vector<double> x(filter.c_in() * n * n);
  adjoint_into(filter, n, y.values(), x);
  return ImageTensor(filter.c_in(), n, std::move(x));
}

LinearOperator<double> conv_operator(const Filter4D& filter,
                                     const InputGeometry& geometry) {
  geometry.require_fits(filter.shape());
  auto shared = std::make_shared<const Filter4D>(filter);
  const std::size_t n = geometry.n();
  return LinearOperator<double>{
      filter.c_out() * n * n, filter.c_in() * n * n,
      [shared, n](std::span<const double> x, std::span<double> y) {
        forward_into(*shared, n, x, y);
      },
      [shared, n](std::span<const double> y, std::span<double> x) {
        adjoint_into(*shared, n, y, x);
      }};
}

SpectralEstimate exact_norm_matfree(const Filter4D& filter,
                                    const InputGeometry& geometry,
                                    const PowerIterOptions& options) {
  return spectral_norm(conv_operator(filter, geometry), options);
}

}  // namespace convbound
