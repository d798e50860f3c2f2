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

// convbound: command-line front end.
//
// Exit codes: 0 success, 1 numerical non-convergence, 2 input error,
// 3 explicit-Jacobian size cap.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convbound/bounds.hpp"
#include "convbound/error.hpp"
#include "convbound/filter_io.hpp"
#include "convbound/grad.hpp"
#include "convbound/oracle.hpp"
#include "convbound/random.hpp"
#include "convbound/regdemo.hpp"
#include "convbound/report.hpp"

namespace {

using namespace convbound;

constexpr int kExitOk = 0;
constexpr int kExitNonConvergence = 1;
constexpr int kExitInput = 2;
constexpr int kExitSizeCap = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw FormatError("bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw FormatError("empty integer list");
  return out;
}

std::vector<FilterShape> parse_shape_list(const std::string& text) {
  std::vector<FilterShape> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(parse_shape(item));
  if (out.empty()) throw FormatError("empty shape list");
  return out;
}

struct PowerFlags {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--tol", tol, "power-iteration relative tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", max_iter, "power-iteration cap");
    cmd->add_option("--seed", seed, "power-iteration start-vector seed");
  }
  PowerIterOptions options() const { return {tol, max_iter, seed}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-norm bounds and exact norms for circular convolution layers"};
  app.require_subcommand(1);

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "reshape bound sqrt(hw)*min(|R|,|S|,|T|,|U|)");
  std::string bound_path;
  bool bound_csv = false;
  PowerFlags bound_power;
  bound_cmd->add_option("filter", bound_path, "CFT1 (.cft1) or JSON (.json) filter")->required();
  bound_cmd->add_flag("--csv", bound_csv, "emit CSV instead of JSON");
  bound_power.add_to(bound_cmd);

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "exact spectral norm of the layer");
  std::string exact_path, exact_method = "fft", dump_path;
  std::size_t exact_n = 0, exact_cap = kDefaultJacobianCap;
  PowerFlags exact_power;
  exact_cmd->add_option("filter", exact_path, "filter file")->required();
  exact_cmd->add_option("--n", exact_n, "input height/width")->required();
  exact_cmd->add_option("--method", exact_method, "fft | matfree | oracle");
  exact_cmd->add_option("--jacobian-cap", exact_cap, "entry cap for --method oracle");
  exact_cmd->add_option("--dump-jacobian", dump_path, "write the explicit Jacobian as CSV");
  exact_power.add_to(exact_cmd);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "bound vs exact over a manifest");
  std::string manifest_path;
  std::size_t compare_n = 32, compare_seeds = 1;
  bool compare_csv = false, compare_matfree = false;
  PowerFlags compare_power;
  compare_cmd->add_option("manifest", manifest_path, "JSON manifest")->required();
  compare_cmd->add_option("--n", compare_n, "default input size");
  compare_cmd->add_option("--seeds", compare_seeds, "seeds per generator entry");
  compare_cmd->add_flag("--matfree", compare_matfree, "also run the matrix-free method");
  compare_cmd->add_flag("--csv", compare_csv, "emit CSV instead of JSON");
  compare_power.add_to(compare_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "timing table");
  std::string bench_shapes = "16x16x3x3", bench_ns = "16,32,64", bench_methods = "fft";
  std::size_t bench_repeats = 3;
  bool bench_csv = false;
  PowerFlags bench_power;
  bench_cmd->add_option("--shapes", bench_shapes, "';'-separated shapes, e.g. 16x16x3x3;64x64x3x3");
  bench_cmd->add_option("--n-list", bench_ns, "comma-separated input sizes");
  bench_cmd->add_option("--repeats", bench_repeats, "timed repeats per cell");
  bench_cmd->add_option("--methods", bench_methods, "comma-separated exact methods");
  bench_cmd->add_flag("--csv", bench_csv, "emit CSV instead of JSON");
  bench_power.add_to(bench_cmd);

  // gradcheck
  auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference check of the bound gradient");
  std::string grad_path;
  double grad_eps = 1e-6, grad_tol = 1e-5;
  grad_cmd->add_option("filter", grad_path, "filter file")->required();
  grad_cmd->add_option("--eps", grad_eps, "central-difference step")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--tol", grad_tol, "max absolute error");

  // regdemo
  auto* reg_cmd = app.add_subcommand("regdemo", "toy training run with the bound as regulariser");
  std::string reg_config, reg_out;
  reg_cmd->add_option("config", reg_config, "JSON config")->required();
  reg_cmd->add_option("--out", reg_out, "trace CSV path (default stdout)");

  // random
  auto* random_cmd = app.add_subcommand("random", "write a seeded N(0,1) filter");
  std::string random_dims, random_out;
  std::uint64_t random_seed = 0;
  random_cmd->add_option("--dims", random_dims, "e.g. 64x64x3x3")->required();
  random_cmd->add_option("--seed", random_seed, "generator seed");
  random_cmd->add_option("--out", random_out, "output path (.json selects JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*bound_cmd) {
      const Filter4D filter = load_filter(bound_path);
      const BoundReport report = compute_bound(filter, bound_power.options());
      if (bound_csv) {
        std::cout << bound_csv_header() << '\n' << bound_csv_row(filter.shape(), report) << '\n';
      } else {
        std::cout << bound_report_json(filter.shape(), report).dump(2) << '\n';
      }
      return report.all_converged() ? kExitOk : kExitNonConvergence;
    }
    if (*exact_cmd) {
      const Filter4D filter = load_filter(exact_path);
      const ExactMethod method = parse_exact_method(exact_method);
      if (!dump_path.empty()) {
        dump_jacobian_csv(build_jacobian(filter, InputGeometry(exact_n), exact_cap), dump_path);
      }
      const ExactRun run = run_exact(filter, exact_n, method, exact_power.options(), exact_cap);
      auto doc = exact_run_json(filter.shape(), run);
      doc.erase("seconds");
      std::cout << doc.dump(2) << '\n';
      return run.converged ? kExitOk : kExitNonConvergence;
    }
    if (*compare_cmd) {
      const std::filesystem::path mpath(manifest_path);
      const auto entries = parse_manifest(read_text(manifest_path), mpath.parent_path());
      CompareOptions options;
      options.default_n = compare_n;
      options.seeds = compare_seeds;
      options.matfree = compare_matfree;
      options.power = compare_power.options();
      const auto rows = run_compare(entries, options);
      if (compare_csv) {
        std::cout << compare_csv_header() << '\n';
        for (const auto& row : rows) std::cout << compare_csv_row(row) << '\n';
      } else {
        std::cout << compare_json(rows).dump(2) << '\n';
      }
      return kExitOk;
    }
    if (*bench_cmd) {
      BenchOptions options;
      options.shapes = parse_shape_list(bench_shapes);
      options.n_list = parse_size_list(bench_ns);
      options.repeats = bench_repeats;
      options.methods.clear();
      std::stringstream ss(bench_methods);
      std::string m;
      while (std::getline(ss, m, ',')) options.methods.push_back(parse_exact_method(m));
      options.power = bench_power.options();
      const auto rows = run_bench(options);
      if (bench_csv) {
        std::cout << bench_csv_header() << '\n';
        for (const auto& row : rows) std::cout << bench_csv_row(row) << '\n';
      } else {
        std::cout << bench_json(rows).dump(2) << '\n';
      }
      return kExitOk;
    }
    if (*grad_cmd) {
      const Filter4D filter = load_filter(grad_path);
      const auto report = finite_diff_check(filter, grad_eps, grad_tol);
      std::cout << gradcheck_json(filter.shape(), report, grad_eps, grad_tol).dump(2) << '\n';
      return report.passed ? kExitOk : kExitNonConvergence;
    }
    if (*reg_cmd) {
      const RegDemoConfig cfg = parse_regdemo_config(read_text(reg_config));
      const RegDemoTrace trace = run_regdemo(cfg);
      if (reg_out.empty()) {
        write_trace_csv(trace, std::cout);
      } else {
        std::ofstream out(reg_out);
        if (!out) throw IoError("cannot open '" + reg_out + "' for writing");
        write_trace_csv(trace, out);
      }
      std::cerr << "final bound " << trace.final_bound << ", exact " << trace.final_exact
                << '\n';
      return kExitOk;
    }
    if (*random_cmd) {
      const Filter4D filter = random_filter(parse_shape(random_dims), random_seed);
      save_filter(filter, random_out, format_from_path(random_out));
      return kExitOk;
    }
  } catch (const SizeCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const GradientError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
