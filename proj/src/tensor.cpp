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

#include "convbound/tensor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "convbound/error.hpp"

namespace convbound {

namespace {

bool is_finite(double x) { return std::isfinite(x); }
bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

std::string FilterShape::to_string() const {
  std::ostringstream os;
  os << c_out << 'x' << c_in << 'x' << h << 'x' << w;
  return os.str();
}

FilterShape parse_shape(const std::string& text) {
  std::vector<std::size_t> dims;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw FormatError("bad filter shape '" + text + "'");
    if (!std::all_of(token.begin(), token.end(),
                     [](unsigned char ch) { return std::isdigit(ch); })) {
      throw FormatError("bad filter shape '" + text + "'");
    }
    dims.push_back(std::stoull(token));
    token.clear();
  };
  for (char ch : text) {
    if (ch == 'x' || ch == 'X' || ch == ',') {
      flush();
    } else if (ch != ' ') {
      token.push_back(ch);
    }
  }
  flush();
  if (dims.size() != 4 ||
      std::any_of(dims.begin(), dims.end(), [](auto d) { return d == 0; })) {
    throw FormatError("filter shape needs four positive dims: '" + text + "'");
  }
  return {dims[0], dims[1], dims[2], dims[3]};
}

Filter4D::Filter4D(FilterShape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
  if (shape_.c_out == 0 || shape_.c_in == 0 || shape_.h == 0 ||
      shape_.w == 0) {
    throw IntegrityError("filter dims must all be >= 1, got " +
                         shape_.to_string());
  }
  if (values_.size() != shape_.size()) {
    throw IntegrityError("filter " + shape_.to_string() + " expects " +
                         std::to_string(shape_.size()) + " values, got " +
                         std::to_string(values_.size()));
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError("filter has a non-finite value");
  }
}

double Filter4D::spatial_scale() const {
  return std::sqrt(static_cast<double>(shape_.h * shape_.w));
}

template <class Scalar>
BasicMatrix<Scalar>::BasicMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<Scalar> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) throw ShapeError("matrix dims must be >= 1");
  if (values_.size() != rows_ * cols_) {
    throw ShapeError("matrix " + std::to_string(rows_) + "x" +
                     std::to_string(cols_) + " got " +
                     std::to_string(values_.size()) + " values");
  }
  for (const auto& x : values_) {
    if (!is_finite(x)) throw DomainError("matrix has a non-finite entry");
  }
}

template <class Scalar>
double BasicMatrix<Scalar>::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& x : values_) sum += std::norm(x);
  return std::sqrt(sum);
}

template <class Scalar>
BasicMatrix<Scalar> BasicMatrix<Scalar>::transposed() const {
  std::vector<Scalar> out(values_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out[j * rows_ + i] = values_[i * cols_ + j];
    }
  }
  return BasicMatrix(cols_, rows_, std::move(out));
}

template <class Scalar>
BasicMatrix<Scalar> BasicMatrix<Scalar>::scaled(double alpha) const {
  std::vector<Scalar> out(values_);
  for (auto& x : out) x *= alpha;
  return BasicMatrix(rows_, cols_, std::move(out));
}

template class BasicMatrix<double>;
template class BasicMatrix<Complex>;

InputGeometry::InputGeometry(std::size_t n) : n_(n) {
  if (n_ == 0) throw GeometryError("input size n must be >= 1");
}

void InputGeometry::require_fits(const FilterShape& shape) const {
  if (n_ <= std::max(shape.h, shape.w)) {
    throw GeometryError("input size n=" + std::to_string(n_) +
                        " must exceed max(h, w) of filter " +
                        shape.to_string());
  }
}

ImageTensor::ImageTensor(std::size_t channels, std::size_t n,
                         std::vector<double> values)
    : channels_(channels), n_(n), values_(std::move(values)) {
  if (channels_ == 0 || n_ == 0) throw ShapeError("image dims must be >= 1");
  if (values_.size() != channels_ * n_ * n_) {
    throw ShapeError("image " + std::to_string(channels_) + "x" +
                     std::to_string(n_) + "x" + std::to_string(n_) + " got " +
                     std::to_string(values_.size()) + " values");
  }
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError("image has a non-finite value");
  }
}

}  // namespace convbound
