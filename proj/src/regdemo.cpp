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

#include "convbound/regdemo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "convbound/conv.hpp"
#include "convbound/exact_fft.hpp"
#include "convbound/random.hpp"

namespace convbound {

namespace {

// Independent streams derived from the run seed.
enum Stream : std::uint64_t { kTeacher = 1, kInputs = 2, kStudent = 3, kPower = 4 };

std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
  return seed * 0x9e3779b97f4a7c15ULL + s;
}

struct Dataset {
  std::vector<ImageTensor> inputs;
  std::vector<ImageTensor> targets;
};

Dataset make_dataset(const RegDemoConfig& cfg, const InputGeometry& geometry) {
  const Filter4D teacher = random_filter(cfg.dims, stream_seed(cfg.seed, kTeacher));
  NormalSampler sampler(stream_seed(cfg.seed, kInputs));
  const std::size_t n = cfg.n;
  Dataset data;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    ImageTensor x(cfg.dims.c_in, n, sampler.normals(cfg.dims.c_in * n * n));
    const ImageTensor clean = conv_forward(teacher, x, geometry);
    std::vector<double> y(clean.values().begin(), clean.values().end());
    for (auto& yi : y) yi += cfg.noise * sampler.normal();
    data.inputs.push_back(std::move(x));
    data.targets.emplace_back(cfg.dims.c_out, n, std::move(y));
  }
  return data;
}

// Data loss and its gradient with respect to the filter.
double loss_and_grad(const Filter4D& filter, const Dataset& data,
                     const InputGeometry& geometry, std::vector<double>& grad) {
  const auto& s = filter.shape();
  const std::size_t n = geometry.n();
  const double norm = 1.0 / static_cast<double>(data.inputs.size() * s.c_out * n * n);
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.inputs.size(); ++i) {
    const ImageTensor pred = conv_forward(filter, data.inputs[i], geometry);
    const auto& x = data.inputs[i];
    const auto& t = data.targets[i];
    for (std::size_t c = 0; c < s.c_out; ++c) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t q = 0; q < n; ++q) {
          const double e = pred(c, r, q) - t(c, r, q);
          loss += 0.5 * e * e;
          for (std::size_t d = 0; d < s.c_in; ++d) {
            for (std::size_t k = 0; k < s.h; ++k) {
              for (std::size_t l = 0; l < s.w; ++l) {
                grad[filter.flat_index(c, d, k, l)] +=
                    e * x(d, (r + k) % n, (q + l) % n);
              }
            }
          }
        }
      }
    }
  }
  for (auto& g : grad) g *= norm;
  return loss * norm;
}

}  // namespace

void RegDemoConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw PreconditionError("beta must be >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw PreconditionError("lr must be > 0");
  if (steps == 0) throw PreconditionError("steps must be >= 1");
  if (samples == 0) throw PreconditionError("samples must be >= 1");
  if (exact_every == 0) throw PreconditionError("exact_every must be >= 1");
  if (!(noise >= 0.0)) throw PreconditionError("noise must be >= 0");
  if (!(init_scale >= 0.0)) throw PreconditionError("init_scale must be >= 0");
  if (dims.size() == 0) throw PreconditionError("filter dims must be positive");
  InputGeometry(n).require_fits(dims);
}

RegDemoConfig parse_regdemo_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("regdemo config does not parse: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("regdemo config must be a JSON object");
  RegDemoConfig cfg;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "steps") cfg.steps = value.get<std::size_t>();
      else if (key == "lr") cfg.lr = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "n") cfg.n = value.get<std::size_t>();
      else if (key == "samples") cfg.samples = value.get<std::size_t>();
      else if (key == "noise") cfg.noise = value.get<double>();
      else if (key == "exact_every") cfg.exact_every = value.get<std::size_t>();
      else if (key == "init_scale") cfg.init_scale = value.get<double>();
      else if (key == "dims") {
        const auto d = value.get<std::vector<std::size_t>>();
        if (d.size() != 4) throw FormatError("regdemo 'dims' needs 4 entries");
        cfg.dims = {d[0], d[1], d[2], d[3]};
      } else {
        throw FormatError("unknown regdemo config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad regdemo config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RegDemoTrace run_regdemo(const RegDemoConfig& cfg, const RegularizerHook& hook) {
  cfg.validate();
  const InputGeometry geometry(cfg.n);
  const Dataset data = make_dataset(cfg, geometry);

  Filter4D filter = random_filter(cfg.dims, stream_seed(cfg.seed, kStudent));
  {
    std::vector<double> v(filter.values().begin(), filter.values().end());
    for (auto& x : v) x *= cfg.init_scale;
    filter = Filter4D(cfg.dims, std::move(v));
  }
  WarmStates states = initial_warm_states(cfg.dims, stream_seed(cfg.seed, kPower));
  const PowerIterOptions exact_options{1e-9, 10000, cfg.seed};

  RegDemoTrace trace;
  trace.min_loss = std::numeric_limits<double>::infinity();
  std::vector<double> data_grad(filter.size());

  for (std::size_t step = 0; step <= cfg.steps; ++step) {
    const double loss = loss_and_grad(filter, data, geometry, data_grad);
    std::optional<WarmGradResult> warm;
    RegDemoRecord record{step, loss, std::numeric_limits<double>::quiet_NaN(), std::nullopt};
    try {
      warm = warm_grad_step(filter, states);
      record.bound = warm->report.bound;
      if (step % cfg.exact_every == 0 || step == cfg.steps) {
        record.exact = exact_norm_fft(filter, geometry, exact_options, 1);
      }
    } catch (const DomainError&) {
      // Overflow inside the spectral computations.
    }
    if (!std::isfinite(loss) || !std::isfinite(record.bound)) {
      trace.records.push_back(record);
      throw DivergenceError("regdemo diverged at step " + std::to_string(step),
                            std::move(trace));
    }
    trace.records.push_back(record);
    trace.min_loss = std::min(trace.min_loss, loss);
    if (step == cfg.steps) break;

    if (hook) hook(step, filter, states, warm->gradient);
    std::vector<double> next(filter.values().begin(), filter.values().end());
    const auto reg = warm->gradient.grad.values();
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] -= cfg.lr * (data_grad[i] + cfg.beta * reg[i]);
    }
    states = std::move(warm->states);
    try {
      filter = Filter4D(cfg.dims, std::move(next));
    } catch (const DomainError&) {
      throw DivergenceError("regdemo diverged after step " + std::to_string(step),
                            std::move(trace));
    }
  }

  trace.final_bound = compute_bound(filter, exact_options).bound;
  trace.final_exact = exact_norm_fft(filter, geometry, exact_options, 1);
  trace.final_filter = std::move(filter);
  return trace;
}

void write_trace_csv(const RegDemoTrace& trace, std::ostream& out) {
  out << "step,loss,bound,exact\n";
  out << std::setprecision(10);
  for (const auto& r : trace.records) {
    out << r.step << ',' << r.loss << ',' << r.bound << ',';
    if (r.exact) out << *r.exact;
    out << '\n';
  }
}

}  // namespace convbound
