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

// Circular (wrap-around) convolution with stride 1 and its adjoint, by
// direct spatial summation:
//
//   Y[c][r][s] = sum_d sum_(k<h) sum_(l<w) X[d][(r+k) mod n][(s+l) mod n] * L[c,d,k,l]
//
// and the matrix-free exact spectral norm built from the pair.

#pragma once

#include "convbound/specnorm.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

/// Throws ShapeError if X is not c_in x n x n, GeometryError unless
/// n > max(h, w).
ImageTensor conv_forward(const Filter4D& filter, const ImageTensor& x,
                         const InputGeometry& geometry);

/// Transposed convolution: <conv_forward(X), Y> == <X, conv_adjoint(Y)>.
ImageTensor conv_adjoint(const Filter4D& filter, const ImageTensor& y,
                         const InputGeometry& geometry);

/// The layer as a LinearOperator of shape (c_out*n*n) x (c_in*n*n) over
/// flattened images. The filter is copied into the operator.
LinearOperator<double> conv_operator(const Filter4D& filter,
                                     const InputGeometry& geometry);

/// Power iteration alternating conv_forward and conv_adjoint. The singular
/// vectors come back as flattened images (u: c_out*n*n, v: c_in*n*n).
SpectralEstimate exact_norm_matfree(const Filter4D& filter,
                                    const InputGeometry& geometry,
                                    const PowerIterOptions& options = {});

}  // namespace convbound
