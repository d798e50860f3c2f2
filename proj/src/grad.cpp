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

#include "convbound/grad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace convbound {

namespace {

// Cheaper settings for the deflated sigma_2 estimate; it only has to
// resolve a relative gap of kGapThreshold.
PowerIterOptions gap_options(const PowerIterOptions& options) {
  PowerIterOptions out = options;
  out.tol = std::max(options.tol, 1e-9);
  out.max_iter = std::min<std::size_t>(options.max_iter, 20000);
  out.seed = options.seed + 1;
  return out;
}

Filter4D with_entry(const Filter4D& filter, std::size_t index, double delta) {
  std::vector<double> values(filter.values().begin(), filter.values().end());
  values[index] += delta;
  return Filter4D(filter.shape(), std::move(values));
}

}  // namespace

BoundGradient gradient_from_report(const Filter4D& filter,
                                   const BoundReport& report,
                                   const PowerIterOptions& options) {
  const Reshape branch = report.argmin;
  const auto& est = report.estimate(branch);
  const DenseMatrix matrix = build_reshape(branch, filter);
  std::vector<double> g(est.u.size() * est.v.size());
  for (std::size_t i = 0; i < est.u.size(); ++i) {
    for (std::size_t j = 0; j < est.v.size(); ++j) {
      g[i * est.v.size() + j] = report.scale * est.u[i] * est.v[j];
    }
  }
  const double sigma2 = second_singular_value(matrix, est, gap_options(options));
  return BoundGradient{
      unreshape(branch, filter.shape(),
                DenseMatrix(matrix.rows(), matrix.cols(), std::move(g))),
      branch, est.sigma - sigma2 >= kGapThreshold * est.sigma, sigma2};
}

BoundGradient grad_bound(const Filter4D& filter, const PowerIterOptions& options) {
  BoundReport report = compute_bound(filter, options);
  if (!report.estimate(report.argmin).converged) {
    throw GradientError("power iteration on branch " +
                            std::string(reshape_name(report.argmin)) +
                            " did not converge",
                        std::move(report));
  }
  return gradient_from_report(filter, report, options);
}

FiniteDiffReport finite_diff_check(const Filter4D& filter, double eps,
                                   double tol, const PowerIterOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const BoundReport base = compute_bound(filter, options);
  const BoundGradient analytic = gradient_from_report(filter, base, options);

  FiniteDiffReport out;
  out.gap_ok = analytic.gap_ok && base.estimate(base.argmin).converged;
  out.analytic.assign(analytic.grad.values().begin(), analytic.grad.values().end());
  out.numeric.resize(filter.size());

  const double min_norm = base.norm(base.argmin);
  bool branch_tie = false;
  for (Reshape r : kAllReshapes) {
    if (r != base.argmin && base.norm(r) - min_norm <= 2.0 * eps) branch_tie = true;
  }

  for (std::size_t i = 0; i < filter.size(); ++i) {
    const double plus = compute_bound(with_entry(filter, i, eps), options).bound;
    const double minus = compute_bound(with_entry(filter, i, -eps), options).bound;
    out.numeric[i] = (plus - minus) / (2.0 * eps);
    if (branch_tie || !out.gap_ok) {
      out.nonsmooth.push_back(i);
      continue;
    }
    const double err = std::abs(out.numeric[i] - out.analytic[i]);
    if (err > out.max_abs_err) {
      out.max_abs_err = err;
      out.worst_index = i;
    }
  }
  out.passed = out.max_abs_err <= tol;
  return out;
}

WarmStates initial_warm_states(const FilterShape& shape, std::uint64_t seed) {
  WarmStates states;
  for (Reshape r : kAllReshapes) {
    const auto dims = reshape_dims(r, shape);
    states[static_cast<int>(r)] = PowerIterState::random(dims.row, dims.col, seed);
  }
  return states;
}

WarmGradResult warm_grad_step(const Filter4D& filter, const WarmStates& states,
                              const PowerIterOptions& options) {
  WarmStates next;
  std::array<SpectralEstimate, 4> estimates;
  std::array<DenseMatrix, 4> matrices = {
      build_reshape(Reshape::kR, filter), build_reshape(Reshape::kS, filter),
      build_reshape(Reshape::kT, filter), build_reshape(Reshape::kU, filter)};
  for (std::size_t i = 0; i < 4; ++i) {
    auto step = warm_step(matrices[i], states[i]);
    SpectralEstimate est;
    est.sigma = step.sigma;
    est.u = step.state.u;
    est.v = step.state.v;
    est.iterations = 1;
    est.residual = singular_residual(matrices[i], est.u, est.v, est.sigma);
    est.converged = est.residual <= options.tol * est.sigma;
    estimates[i] = std::move(est);
    next[i] = std::move(step.state);
  }
  BoundReport report = make_bound_report(filter.shape(), std::move(estimates));
  BoundGradient gradient = gradient_from_report(filter, report, options);
  return WarmGradResult{std::move(report), std::move(gradient), std::move(next)};
}

}  // namespace convbound
