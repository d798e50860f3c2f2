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

// Dense value types shared by every module. All of them validate their
// invariants on construction and are immutable afterwards.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace convbound {

using Complex = std::complex<double>;

/// Dimensions of a convolution filter, (c_out, c_in, h, w).
struct FilterShape {
  std::size_t c_out = 1;
  std::size_t c_in = 1;
  std::size_t h = 1;
  std::size_t w = 1;

  std::size_t size() const { return c_out * c_in * h * w; }
  std::string to_string() const;  // "c_outxc_inxhxw"

  friend bool operator==(const FilterShape&, const FilterShape&) = default;
};

/// Parses "64x64x3x3" (or comma separated). Throws FormatError.
FilterShape parse_shape(const std::string& text);

/// A c_out x c_in x h x w real filter. Element (c, d, k, l) lives at flat
/// index ((c * c_in + d) * h + k) * w + l.
class Filter4D {
 public:
  /// Throws IntegrityError on zero dims or a length mismatch and
  /// DomainError on a non-finite value.
  Filter4D(FilterShape shape, std::vector<double> values);

  const FilterShape& shape() const { return shape_; }
  std::size_t c_out() const { return shape_.c_out; }
  std::size_t c_in() const { return shape_.c_in; }
  std::size_t h() const { return shape_.h; }
  std::size_t w() const { return shape_.w; }
  std::size_t size() const { return values_.size(); }

  std::size_t flat_index(std::size_t c, std::size_t d, std::size_t k,
                         std::size_t l) const {
    return ((c * shape_.c_in + d) * shape_.h + k) * shape_.w + l;
  }
  double operator()(std::size_t c, std::size_t d, std::size_t k,
                    std::size_t l) const {
    return values_[flat_index(c, d, k, l)];
  }

  std::span<const double> values() const { return values_; }

  /// sqrt(h * w), the factor in front of every reshape bound.
  double spatial_scale() const;

  friend bool operator==(const Filter4D&, const Filter4D&) = default;

 private:
  FilterShape shape_;
  std::vector<double> values_;
};

/// Row-major dense matrix over double or std::complex<double>.
template <class Scalar>
class BasicMatrix {
 public:
  using value_type = Scalar;

  /// Throws ShapeError on zero dims or a length mismatch and DomainError on
  /// non-finite entries.
  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<Scalar> values);

  static BasicMatrix zeros(std::size_t rows, std::size_t cols) {
    return BasicMatrix(rows, cols, std::vector<Scalar>(rows * cols));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  std::span<const Scalar> values() const { return values_; }

  double frobenius_norm() const;
  BasicMatrix transposed() const;
  BasicMatrix scaled(double alpha) const;

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> values_;
};

using DenseMatrix = BasicMatrix<double>;
using ComplexMatrix = BasicMatrix<Complex>;

extern template class BasicMatrix<double>;
extern template class BasicMatrix<Complex>;

/// Square input of size n x n. Pairing with a filter requires n > max(h, w).
class InputGeometry {
 public:
  explicit InputGeometry(std::size_t n);
  std::size_t n() const { return n_; }

  /// Throws GeometryError unless n > max(h, w).
  void require_fits(const FilterShape& shape) const;

 private:
  std::size_t n_;
};

/// A channels x n x n image, row-major.
class ImageTensor {
 public:
  ImageTensor(std::size_t channels, std::size_t n, std::vector<double> values);
  static ImageTensor zeros(std::size_t channels, std::size_t n) {
    return ImageTensor(channels, n, std::vector<double>(channels * n * n));
  }

  std::size_t channels() const { return channels_; }
  std::size_t n() const { return n_; }
  double operator()(std::size_t c, std::size_t r, std::size_t s) const {
    return values_[(c * n_ + r) * n_ + s];
  }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t channels_;
  std::size_t n_;
  std::vector<double> values_;
};

}  // namespace convbound
