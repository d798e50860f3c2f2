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

// Toy training run with the bound as a regulariser.
//
// A single circular-convolution layer (the student) is fit to a fixed
// random teacher filter by plain gradient descent on
//
//   loss(L) + beta * bound(L),
//   loss(L) = 1 / (2 N c_out n^2) * sum_i |conv(L, X_i) - Y_i|^2,
//   Y_i     = conv(teacher, X_i) + noise * N(0, 1).
//
// The bound term is differentiated with warm_grad_step, carrying the four
// power-iteration states from step to step.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "convbound/bounds.hpp"
#include "convbound/error.hpp"
#include "convbound/grad.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

struct RegDemoConfig {
  double beta = 0.1;
  std::size_t steps = 500;
  double lr = 0.2;
  std::uint64_t seed = 0;
  FilterShape dims{1, 1, 3, 3};
  std::size_t n = 8;
  std::size_t samples = 16;
  double noise = 0.01;
  std::size_t exact_every = 25;
  double init_scale = 0.1;  // student starts at init_scale * N(0, 1)

  /// Throws PreconditionError on a non-positive field where positivity is
  /// required, GeometryError if n <= max(h, w).
  void validate() const;
};

/// Parses the JSON config file format; unknown keys are rejected.
RegDemoConfig parse_regdemo_config(const std::string& json_text);

struct RegDemoRecord {
  std::size_t step = 0;
  double loss = 0.0;
  double bound = 0.0;  // warm-started estimate used at this step
  std::optional<double> exact;
};

struct RegDemoTrace {
  std::vector<RegDemoRecord> records;  // steps + 1 entries, last is final
  std::optional<Filter4D> final_filter;
  double final_bound = 0.0;  // converged compute_bound on final_filter
  double final_exact = 0.0;  // exact_norm_fft on final_filter
  double min_loss = 0.0;
};

/// Called once per step with the filter, the states going into
/// warm_grad_step and the gradient that was then used for the update.
using RegularizerHook = std::function<void(
    std::size_t step, const Filter4D& filter, const WarmStates& states_before,
    const BoundGradient& used)>;

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, RegDemoTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const RegDemoTrace& partial() const { return partial_; }

 private:
  RegDemoTrace partial_;
};

RegDemoTrace run_regdemo(const RegDemoConfig& config,
                         const RegularizerHook& hook = {});

/// CSV with header "step,loss,bound,exact"; exact is empty when not sampled.
void write_trace_csv(const RegDemoTrace& trace, std::ostream& out);

}  // namespace convbound
