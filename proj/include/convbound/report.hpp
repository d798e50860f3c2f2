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

// Report assembly behind the command-line tool: comparison tables, timing
// tables and their JSON / CSV encodings.
//
// JSON numbers are rounded to 6 significant digits; every JSON report also
// carries a "hex" object with the same quantities as C99 hex floats so that
// regressions can be checked bit for bit. CSV columns are fixed and listed
// by the *_csv_header() functions.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "convbound/bounds.hpp"
#include "convbound/grad.hpp"
#include "convbound/specnorm.hpp"
#include "convbound/tensor.hpp"

namespace convbound {

inline constexpr const char* kBoundSchema = "convbound.bound/1";
inline constexpr const char* kExactSchema = "convbound.exact/1";
inline constexpr const char* kCompareSchema = "convbound.compare/1";
inline constexpr const char* kBenchSchema = "convbound.bench/1";
inline constexpr const char* kGradcheckSchema = "convbound.gradcheck/1";

/// x rounded to 6 significant digits.
double round6(double x);
/// "%a" rendering, e.g. "0x1.0f876ccdf6cd9p+2".
std::string hex_double(double x);

nlohmann::json bound_report_json(const FilterShape& shape, const BoundReport& report);
std::string bound_csv_header();
std::string bound_csv_row(const FilterShape& shape, const BoundReport& report);

enum class ExactMethod { kFft, kMatfree, kOracle };
ExactMethod parse_exact_method(const std::string& name);
std::string exact_method_name(ExactMethod method);

struct ExactRun {
  ExactMethod method = ExactMethod::kFft;
  std::size_t n = 0;
  double sigma = 0.0;
  bool converged = true;
  std::size_t iterations = 0;  // worst case for kFft
  double seconds = 0.0;
};

/// Throws SizeCapError for kOracle beyond `jacobian_cap`.
ExactRun run_exact(const Filter4D& filter, std::size_t n, ExactMethod method,
                   const PowerIterOptions& options,
                   std::size_t jacobian_cap, std::size_t workers = 0);
nlohmann::json exact_run_json(const FilterShape& shape, const ExactRun& run);

/// One manifest entry: either a generator spec (dims + optional seed) or a
/// filter file path. A missing n falls back to CompareOptions::default_n.
struct ManifestEntry {
  std::string label;
  std::optional<FilterShape> dims;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> path;
  std::optional<std::size_t> n;
};

/// Parses a JSON list of {"dims": [...], "seed": s} / {"path": p} objects,
/// each with optional "n" and "label". Relative paths resolve against
/// `base_dir`.
std::vector<ManifestEntry> parse_manifest(const std::string& json_text,
                                          const std::filesystem::path& base_dir);

struct CompareOptions {
  std::size_t default_n = 32;
  std::size_t seeds = 1;  // generator entries without a seed expand to 0..seeds-1
  bool matfree = false;
  PowerIterOptions power;
  std::size_t workers = 0;
};

struct ComparisonRow {
  std::string label;
  FilterShape shape;
  std::optional<std::uint64_t> seed;
  std::size_t n = 0;
  std::array<double, 4> scaled_norms{};  // sqrt(hw) * |R|, |S|, |T|, |U|
  double bound = 0.0;
  Reshape argmin = Reshape::kR;
  double exact_fft = 0.0;
  std::optional<double> exact_matfree;
  double ratio = 0.0;  // bound / exact_fft
  double t_bound = 0.0;
  double t_fft = 0.0;
  std::optional<double> t_matfree;
  std::string error;  // non-empty when the row failed; other fields unset
};

/// One row per (entry, seed). Row failures are recorded in the row.
std::vector<ComparisonRow> run_compare(const std::vector<ManifestEntry>& entries,
                                       const CompareOptions& options);

struct RatioSummary {
  std::string label;
  std::size_t rows = 0;
  double mean_ratio = 0.0;
};
std::vector<RatioSummary> summarize_ratios(const std::vector<ComparisonRow>& rows);

std::string compare_csv_header();
std::string compare_csv_row(const ComparisonRow& row);
nlohmann::json compare_json(const std::vector<ComparisonRow>& rows);

struct BenchOptions {
  std::vector<FilterShape> shapes;
  std::vector<std::size_t> n_list;
  std::size_t repeats = 3;
  std::vector<ExactMethod> methods{ExactMethod::kFft};
  std::uint64_t seed = 0;
  PowerIterOptions power;
  std::size_t jacobian_cap = std::size_t{1} << 24;
  std::size_t workers = 0;
};

/// method is "bound" or an exact-method name. Bound rows have no n: the
/// bound is measured once per shape.
struct BenchRow {
  std::string shape;
  std::string method;
  std::optional<std::size_t> n;
  double median_seconds = 0.0;
  double value = 0.0;
  std::string status = "ok";  // "ok" or "size-cap"
};

std::vector<BenchRow> run_bench(const BenchOptions& options);
std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);
nlohmann::json bench_json(const std::vector<BenchRow>& rows);

nlohmann::json gradcheck_json(const FilterShape& shape, const FiniteDiffReport& report,
                              double eps, double tol);

}  // namespace convbound
