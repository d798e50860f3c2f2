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

#include "convbound/specnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "convbound/error.hpp"
#include "convbound/random.hpp"

namespace convbound {

namespace {

double conj_if(double x) { return x; }
Complex conj_if(const Complex& z) { return std::conj(z); }

template <class Scalar>
double norm2(std::span<const Scalar> x) {
  double sum = 0.0;
  for (const auto& xi : x) sum += std::norm(xi);
  return std::sqrt(sum);
}

template <class Scalar>
double distance(std::span<const Scalar> a, std::span<const Scalar> b,
                double b_scale) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b_scale * b[i]);
  return std::sqrt(sum);
}

template <class Scalar>
void scale_into(std::span<const Scalar> x, double alpha, std::vector<Scalar>& out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i];
}

// y = M x
template <class Scalar>
void gemv(const BasicMatrix<Scalar>& m, std::span<const Scalar> x,
          std::span<Scalar> y) {
  const auto a = m.values();
  const std::size_t cols = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Scalar acc{};
    const Scalar* row = a.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

// y = M^H x
template <class Scalar>
void gemv_adjoint(const BasicMatrix<Scalar>& m, std::span<const Scalar> x,
                  std::span<Scalar> y) {
  const auto a = m.values();
  const std::size_t cols = m.cols();
  std::fill(y.begin(), y.end(), Scalar{});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Scalar* row = a.data() + i * cols;
    const Scalar xi = x[i];
    for (std::size_t j = 0; j < cols; ++j) y[j] += conj_if(row[j]) * xi;
  }
}

// Complex kernels spelled out in real arithmetic: std::complex products
// otherwise go through the C99 Annex G NaN/inf recovery path.
void gemv(const ComplexMatrix& m, std::span<const Complex> x, std::span<Complex> y) {
  const double* a = reinterpret_cast<const double*>(m.values().data());
  const double* xv = reinterpret_cast<const double*>(x.data());
  const std::size_t cols = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = a + 2 * i * cols;
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double ar = row[2 * j], ai = row[2 * j + 1];
      const double xr = xv[2 * j], xi = xv[2 * j + 1];
      re += ar * xr - ai * xi;
      im += ar * xi + ai * xr;
    }
    y[i] = Complex(re, im);
  }
}

void gemv_adjoint(const ComplexMatrix& m, std::span<const Complex> x,
                  std::span<Complex> y) {
  const double* a = reinterpret_cast<const double*>(m.values().data());
  double* yv = reinterpret_cast<double*>(y.data());
  const std::size_t cols = m.cols();
  std::fill(y.begin(), y.end(), Complex{});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = a + 2 * i * cols;
    const double xr = x[i].real(), xi = x[i].imag();
    for (std::size_t j = 0; j < cols; ++j) {
      const double ar = row[2 * j], ai = row[2 * j + 1];
      yv[2 * j] += ar * xr + ai * xi;
      yv[2 * j + 1] += ar * xi - ai * xr;
    }
  }
}

template <class Scalar, class Fwd, class Adj>
BasicSpectralEstimate<Scalar> power_iterate(std::size_t rows, std::size_t cols,
                                            const Fwd& fwd, const Adj& adj,
                                            std::vector<Scalar> v,
                                            const PowerIterOptions& options) {
  if (!(options.tol > 0.0)) throw PreconditionError("tol must be positive");
  BasicSpectralEstimate<Scalar> est;
  std::vector<Scalar> w(rows), u(rows), z(cols);
  double sigma = 0.0;
  double rel_change = std::numeric_limits<double>::infinity();
  bool have_sigma = false;

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    fwd(std::span<const Scalar>(v), std::span<Scalar>(w));
    const double wn = norm2<Scalar>(w);
    if (wn == 0.0) {
      // Only reachable on the first pass: a later v lies in range(M^H).
      est.sigma = 0.0;
      est.u.assign(rows, Scalar{});
      est.u[0] = Scalar{1.0};
      est.v = std::move(v);
      est.converged = true;
      est.iterations = iter;
      return est;
    }
    if (have_sigma) {
      est.residual = distance<Scalar>(w, u, sigma);
      if (rel_change <= options.tol && est.residual <= options.tol * sigma) {
        est.converged = true;
        break;
      }
    }
    scale_into<Scalar>(w, 1.0 / wn, u);
    adj(std::span<const Scalar>(u), std::span<Scalar>(z));
    const double zn = norm2<Scalar>(z);
    rel_change = have_sigma ? std::abs(zn - sigma) / zn
                            : std::numeric_limits<double>::infinity();
    sigma = zn;
    have_sigma = true;
    scale_into<Scalar>(z, 1.0 / zn, v);
    est.iterations = iter + 1;
  }

  est.sigma = sigma;
  if (!est.converged && have_sigma) {
    fwd(std::span<const Scalar>(v), std::span<Scalar>(w));
    est.residual = distance<Scalar>(w, u, sigma);
  }
  est.u = std::move(u);
  est.v = std::move(v);
  return est;
}

template <class Scalar>
BasicSpectralEstimate<Scalar> dense_spectral_norm(
    const BasicMatrix<Scalar>& m, const PowerIterOptions& options,
    std::vector<Scalar> (*init)(std::size_t, std::uint64_t)) {
  auto fwd = [&](std::span<const Scalar> x, std::span<Scalar> y) { gemv(m, x, y); };
  auto adj = [&](std::span<const Scalar> x, std::span<Scalar> y) {
    gemv_adjoint(m, x, y);
  };
  if (m.rows() <= m.cols()) {
    return power_iterate<Scalar>(m.rows(), m.cols(), fwd, adj,
                                 init(m.cols(), options.seed), options);
  }
  auto est = power_iterate<Scalar>(m.cols(), m.rows(), adj, fwd,
                                   init(m.rows(), options.seed), options);
  std::swap(est.u, est.v);
  if (est.sigma > 0.0) {
    // The loop measured |M^H u - sigma v|; report the other side as well.
    std::vector<Scalar> w(m.rows());
    gemv(m, std::span<const Scalar>(est.v), std::span<Scalar>(w));
    est.residual = std::max(
        est.residual, distance<Scalar>(w, std::span<const Scalar>(est.u), est.sigma));
  }
  return est;
}

}  // namespace

std::vector<double> random_unit_vector(std::size_t length, std::uint64_t seed) {
  NormalSampler sampler(seed);
  auto v = sampler.normals(length);
  const double nv = norm2<double>(v);
  for (auto& x : v) x /= nv;
  return v;
}

std::vector<Complex> random_complex_unit_vector(std::size_t length,
                                                std::uint64_t seed) {
  NormalSampler sampler(seed);
  std::vector<Complex> v(length);
  for (auto& x : v) {
    const double re = sampler.normal();
    x = Complex(re, sampler.normal());
  }
  const double nv = norm2<Complex>(v);
  for (auto& x : v) x /= nv;
  return v;
}

SpectralEstimate spectral_norm(const DenseMatrix& m,
                               const PowerIterOptions& options) {
  return dense_spectral_norm<double>(m, options, &random_unit_vector);
}

ComplexSpectralEstimate spectral_norm(const ComplexMatrix& m,
                                      const PowerIterOptions& options) {
  return dense_spectral_norm<Complex>(m, options, &random_complex_unit_vector);
}

SpectralEstimate spectral_norm(const LinearOperator<double>& op,
                               const PowerIterOptions& options) {
  if (op.rows == 0 || op.cols == 0 || !op.apply || !op.apply_adjoint) {
    throw PreconditionError("linear operator is empty");
  }
  return power_iterate<double>(op.rows, op.cols, op.apply, op.apply_adjoint,
                               random_unit_vector(op.cols, options.seed),
                               options);
}

PowerIterState PowerIterState::random(std::size_t rows, std::size_t cols,
                                      std::uint64_t seed) {
  PowerIterState state;
  state.u = random_unit_vector(rows, seed ^ 0x5bd1e995ULL);
  state.v = random_unit_vector(cols, seed);
  return state;
}

PowerIterState PowerIterState::from_estimate(const SpectralEstimate& est) {
  return PowerIterState{est.u, est.v, est.sigma};
}

WarmStepResult warm_step(const DenseMatrix& m, const PowerIterState& state) {
  if (state.u.size() != m.rows() || state.v.size() != m.cols()) {
    throw ShapeError("power-iteration state " + std::to_string(state.u.size()) +
                     "/" + std::to_string(state.v.size()) +
                     " does not match matrix " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()));
  }
  WarmStepResult out;
  out.state = state;
  std::vector<double> w(m.rows());
  gemv<double>(m, state.v, w);
  const double wn = norm2<double>(w);
  if (wn == 0.0) {
    out.state.sigma_last = 0.0;
    return out;
  }
  scale_into<double>(w, 1.0 / wn, out.state.u);
  std::vector<double> z(m.cols());
  gemv_adjoint<double>(m, out.state.u, z);
  const double zn = norm2<double>(z);
  scale_into<double>(z, 1.0 / zn, out.state.v);
  out.state.sigma_last = zn;
  out.sigma = zn;
  return out;
}

DenseMatrix grad_sigma_wrt_matrix(const SpectralEstimate& est) {
  if (!est.converged) {
    throw PreconditionError("gradient needs a converged spectral estimate");
  }
  const std::size_t rows = est.u.size();
  const std::size_t cols = est.v.size();
  std::vector<double> g(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) g[i * cols + j] = est.u[i] * est.v[j];
  }
  return DenseMatrix(rows, cols, std::move(g));
}

double second_singular_value(const DenseMatrix& m, const SpectralEstimate& top,
                             const PowerIterOptions& options) {
  if (std::min(m.rows(), m.cols()) == 1 || top.sigma == 0.0) return 0.0;
  const auto& u1 = top.u;
  const auto& v1 = top.v;
  const double s1 = top.sigma;
  auto dot = [](std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };
  LinearOperator<double> deflated{
      m.rows(), m.cols(),
      [&](std::span<const double> x, std::span<double> y) {
        gemv<double>(m, x, y);
        const double c = s1 * dot(v1, x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * u1[i];
      },
      [&](std::span<const double> x, std::span<double> y) {
        gemv_adjoint<double>(m, x, y);
        const double c = s1 * dot(u1, x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * v1[i];
      }};
  return spectral_norm(deflated, options).sigma;
}

double singular_residual(const DenseMatrix& m, std::span<const double> u,
                         std::span<const double> v, double sigma) {
  std::vector<double> w(m.rows());
  gemv<double>(m, v, w);
  return distance<double>(w, u, sigma);
}

}  // namespace convbound
