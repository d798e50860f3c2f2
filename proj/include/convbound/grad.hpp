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

// Gradient of the reshape bound with respect to the filter.
//
// For the selected branch X in {R, S, T, U} with top singular pair (u, v),
// d(sqrt(hw) |X|_2)/dX = sqrt(hw) u v^T, and since X is a permutation of
// the filter entries the filter gradient is that matrix read back through
// the same index map. The gradient never goes through the n^2 c_out x
// n^2 c_in Jacobian.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "convbound/bounds.hpp"
#include "convbound/error.hpp"
#include "convbound/specnorm.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

/// Relative threshold on sigma_1 - sigma_2 below which the top singular
/// value is treated as repeated.
inline constexpr double kGapThreshold = 1e-6;

struct BoundGradient {
  Filter4D grad;   // d bound / d L, shaped like L
  Reshape branch;  // branch the gradient was taken through
  bool gap_ok;     // sigma_1 - sigma_2 >= kGapThreshold * sigma_1 on that branch
  double sigma2;   // deflated estimate of sigma_2 on that branch
};

/// Raised when the selected branch did not converge. Carries the report.
class GradientError : public Error {
 public:
  GradientError(const std::string& what, BoundReport partial)
      : Error(what), partial_(std::move(partial)) {}
  const BoundReport& partial() const { return partial_; }

 private:
  BoundReport partial_;
};

/// Gradient of the selected branch of an existing report. The argmin is
/// the tie-break-selected branch, so at ties this is one subgradient.
BoundGradient gradient_from_report(const Filter4D& filter,
                                   const BoundReport& report,
                                   const PowerIterOptions& options = {});

BoundGradient grad_bound(const Filter4D& filter,
                         const PowerIterOptions& options = {});

struct FiniteDiffReport {
  double max_abs_err = 0.0;     // over entries that are not flagged
  std::size_t worst_index = 0;  // flat filter index of max_abs_err
  bool gap_ok = true;
  std::vector<std::size_t> nonsmooth;  // flagged flat indices
  std::vector<double> analytic;
  std::vector<double> numeric;
  bool passed = true;  // max_abs_err <= tol
};

/// Central differences of compute_bound on every filter entry. An entry is
/// flagged rather than compared when the minimum may switch branch within
/// +-eps (another branch lies within 2*eps of the minimum norm; every
/// branch norm is 1-Lipschitz in each entry) or when the top singular value
/// of the selected branch is repeated. Throws PreconditionError for eps <= 0.
FiniteDiffReport finite_diff_check(const Filter4D& filter, double eps,
                                   double tol,
                                   const PowerIterOptions& options = {
                                       1e-12, 100000, 0});

using WarmStates = std::array<PowerIterState, 4>;

/// Random starting vectors for the four reshapes of `shape`.
WarmStates initial_warm_states(const FilterShape& shape, std::uint64_t seed);

struct WarmGradResult {
  BoundReport report;
  BoundGradient gradient;
  WarmStates states;
};

/// One warm_step per reshape, then report and gradient from the updated
/// vectors. `options.tol` only decides each estimate's converged flag.
/// Throws ShapeError when a state does not fit its reshape.
WarmGradResult warm_grad_step(const Filter4D& filter, const WarmStates& states,
                              const PowerIterOptions& options = {});

}  // namespace convbound
