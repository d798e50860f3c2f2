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

#include "convbound/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "convbound/conv.hpp"
#include "convbound/error.hpp"
#include "convbound/exact_fft.hpp"
#include "convbound/filter_io.hpp"
#include "convbound/oracle.hpp"
#include "convbound/random.hpp"

namespace convbound {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_seconds(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

nlohmann::json dims_json(const FilterShape& s) {
  return nlohmann::json::array({s.c_out, s.c_in, s.h, s.w});
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace

double round6(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(g6(x).c_str(), nullptr);
}

std::string hex_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

nlohmann::json bound_report_json(const FilterShape& shape, const BoundReport& report) {
  nlohmann::json norms, scaled, hex_norms, converged, iterations;
  for (Reshape r : kAllReshapes) {
    const std::string name(reshape_name(r));
    norms[name] = round6(report.norm(r));
    scaled[name] = round6(report.scaled_norm(r));
    hex_norms[name] = hex_double(report.norm(r));
    converged[name] = report.estimate(r).converged;
    iterations[name] = report.estimate(r).iterations;
  }
  return {
      {"schema", kBoundSchema},
      {"dims", dims_json(shape)},
      {"scale", round6(report.scale)},
      {"norms", norms},
      {"scaled_norms", scaled},
      {"bound", round6(report.bound)},
      {"argmin", std::string(reshape_name(report.argmin))},
      {"converged", converged},
      {"iterations", iterations},
      {"hex", {{"bound", hex_double(report.bound)},
               {"scale", hex_double(report.scale)},
               {"norms", hex_norms}}},
  };
}

std::string bound_csv_header() {
  return "dims,scaled_r,scaled_s,scaled_t,scaled_u,bound,argmin,converged";
}

std::string bound_csv_row(const FilterShape& shape, const BoundReport& report) {
  std::ostringstream os;
  os << shape.to_string();
  for (Reshape r : kAllReshapes) os << ',' << g6(report.scaled_norm(r));
  os << ',' << g6(report.bound) << ',' << reshape_name(report.argmin) << ','
     << (report.all_converged() ? "true" : "false");
  return os.str();
}

ExactMethod parse_exact_method(const std::string& name) {
  if (name == "fft") return ExactMethod::kFft;
  if (name == "matfree") return ExactMethod::kMatfree;
  if (name == "oracle") return ExactMethod::kOracle;
  throw FormatError("unknown exact method '" + name + "' (fft, matfree, oracle)");
}

std::string exact_method_name(ExactMethod method) {
  switch (method) {
    case ExactMethod::kFft: return "fft";
    case ExactMethod::kMatfree: return "matfree";
    case ExactMethod::kOracle: return "oracle";
  }
  return "?";
}

ExactRun run_exact(const Filter4D& filter, std::size_t n, ExactMethod method,
                   const PowerIterOptions& options, std::size_t jacobian_cap,
                   std::size_t workers) {
  const InputGeometry geometry(n);
  ExactRun run;
  run.method = method;
  run.n = n;
  switch (method) {
    case ExactMethod::kFft:
      run.seconds = time_seconds([&] {
        const auto r = exact_norm_fft_detailed(filter, geometry, options, workers);
        run.sigma = r.sigma;
        run.converged = r.all_converged;
        run.iterations = r.max_iterations;
      });
      break;
    case ExactMethod::kMatfree:
      run.seconds = time_seconds([&] {
        const auto est = exact_norm_matfree(filter, geometry, options);
        run.sigma = est.sigma;
        run.converged = est.converged;
        run.iterations = est.iterations;
      });
      break;
    case ExactMethod::kOracle:
      run.seconds = time_seconds([&] {
        const auto jac = build_jacobian(filter, geometry, jacobian_cap);
        const auto est = oracle_sigma_max(jac, options);
        run.sigma = est.sigma;
        run.converged = est.converged;
        run.iterations = est.iterations;
      });
      break;
  }
  return run;
}

nlohmann::json exact_run_json(const FilterShape& shape, const ExactRun& run) {
  return {
      {"schema", kExactSchema},
      {"dims", dims_json(shape)},
      {"method", exact_method_name(run.method)},
      {"n", run.n},
      {"sigma", round6(run.sigma)},
      {"converged", run.converged},
      {"iterations", run.iterations},
      {"seconds", run.seconds},
      {"hex", {{"sigma", hex_double(run.sigma)}}},
  };
}

std::vector<ManifestEntry> parse_manifest(const std::string& json_text,
                                          const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("manifest does not parse: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("manifest must be a JSON list");
  std::vector<ManifestEntry> entries;
  try {
    for (const auto& item : doc) {
      if (!item.is_object()) throw FormatError("manifest entries must be objects");
      ManifestEntry e;
      if (item.contains("path")) {
        std::filesystem::path p = item["path"].get<std::string>();
        e.path = p.is_absolute() ? p : base_dir / p;
      }
      if (item.contains("dims")) {
        const auto d = item["dims"].get<std::vector<std::size_t>>();
        if (d.size() != 4 || std::count(d.begin(), d.end(), 0u) > 0) {
          throw FormatError("manifest 'dims' needs four positive entries");
        }
        e.dims = FilterShape{d[0], d[1], d[2], d[3]};
      }
      if (e.path.has_value() == e.dims.has_value()) {
        throw FormatError("manifest entry needs exactly one of 'dims' or 'path'");
      }
      if (item.contains("seed")) e.seed = item["seed"].get<std::uint64_t>();
      if (item.contains("n")) e.n = item["n"].get<std::size_t>();
      if (item.contains("label")) {
        e.label = item["label"].get<std::string>();
      } else {
        e.label = e.dims ? e.dims->to_string() : e.path->filename().string();
      }
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad manifest value: ") + e.what());
  }
  return entries;
}

std::vector<ComparisonRow> run_compare(const std::vector<ManifestEntry>& entries,
                                       const CompareOptions& options) {
  struct Job {
    const ManifestEntry* entry;
    std::optional<std::uint64_t> seed;
  };
  std::vector<Job> jobs;
  for (const auto& e : entries) {
    if (e.path || e.seed) {
      jobs.push_back({&e, e.seed});
    } else {
      for (std::uint64_t s = 0; s < std::max<std::size_t>(options.seeds, 1); ++s) {
        jobs.push_back({&e, s});
      }
    }
  }

  std::vector<ComparisonRow> rows;
  rows.reserve(jobs.size());
  for (const auto& job : jobs) {
    ComparisonRow row;
    row.label = job.entry->label;
    row.seed = job.entry->path ? std::nullopt : job.seed;
    row.n = job.entry->n.value_or(options.default_n);
    try {
      const Filter4D filter = job.entry->path
                                  ? load_filter(*job.entry->path)
                                  : random_filter(*job.entry->dims, *job.seed);
      row.shape = filter.shape();
      BoundReport report;
      row.t_bound = time_seconds([&] { report = compute_bound(filter, options.power); });
      for (Reshape r : kAllReshapes) {
        row.scaled_norms[static_cast<int>(r)] = report.scaled_norm(r);
      }
      row.bound = report.bound;
      row.argmin = report.argmin;
      const auto fft = run_exact(filter, row.n, ExactMethod::kFft, options.power, 0,
                                 options.workers);
      row.exact_fft = fft.sigma;
      row.t_fft = fft.seconds;
      row.ratio = row.bound / row.exact_fft;
      if (options.matfree) {
        const auto mf = run_exact(filter, row.n, ExactMethod::kMatfree, options.power, 0);
        row.exact_matfree = mf.sigma;
        row.t_matfree = mf.seconds;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RatioSummary> summarize_ratios(const std::vector<ComparisonRow>& rows) {
  std::vector<RatioSummary> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    auto [it, inserted] = slot.emplace(row.label, out.size());
    if (inserted) out.push_back({row.label, 0, 0.0});
    auto& s = out[it->second];
    s.mean_ratio += row.ratio;
    ++s.rows;
  }
  for (auto& s : out) s.mean_ratio /= static_cast<double>(s.rows);
  return out;
}

std::string compare_csv_header() {
  return "label,dims,seed,n,scaled_r,scaled_s,scaled_t,scaled_u,bound,argmin,"
         "exact_fft,exact_matfree,ratio,t_bound,t_fft,t_matfree,error";
}

std::string compare_csv_row(const ComparisonRow& row) {
  std::ostringstream os;
  os << row.label << ',';
  if (!row.error.empty()) {
    std::string msg = row.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    os << ',' << (row.seed ? std::to_string(*row.seed) : "") << ',' << row.n
       << ",,,,,,,,,,,,," << msg;
    return os.str();
  }
  os << row.shape.to_string() << ',' << (row.seed ? std::to_string(*row.seed) : "")
     << ',' << row.n;
  for (double x : row.scaled_norms) os << ',' << g6(x);
  os << ',' << g6(row.bound) << ',' << reshape_name(row.argmin) << ','
     << g6(row.exact_fft) << ','
     << (row.exact_matfree ? g6(*row.exact_matfree) : "") << ',' << g6(row.ratio)
     << ',' << g6(row.t_bound) << ',' << g6(row.t_fft) << ','
     << (row.t_matfree ? g6(*row.t_matfree) : "") << ',';
  return os.str();
}

nlohmann::json compare_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::json jrows = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j{{"label", row.label}, {"n", row.n}};
    j["seed"] = row.seed ? nlohmann::json(*row.seed) : nlohmann::json(nullptr);
    if (!row.error.empty()) {
      j["error"] = row.error;
      jrows.push_back(std::move(j));
      continue;
    }
    nlohmann::json scaled;
    for (Reshape r : kAllReshapes) {
      scaled[std::string(reshape_name(r))] = round6(row.scaled_norms[static_cast<int>(r)]);
    }
    j["dims"] = dims_json(row.shape);
    j["scaled_norms"] = scaled;
    j["bound"] = round6(row.bound);
    j["argmin"] = std::string(reshape_name(row.argmin));
    j["exact_fft"] = round6(row.exact_fft);
    j["exact_matfree"] =
        row.exact_matfree ? nlohmann::json(round6(*row.exact_matfree)) : nlohmann::json(nullptr);
    j["ratio"] = round6(row.ratio);
    j["timings"] = {{"bound", row.t_bound},
                    {"fft", row.t_fft},
                    {"matfree", row.t_matfree ? nlohmann::json(*row.t_matfree)
                                              : nlohmann::json(nullptr)}};
    j["hex"] = {{"bound", hex_double(row.bound)},
                {"exact_fft", hex_double(row.exact_fft)},
                {"ratio", hex_double(row.ratio)}};
    jrows.push_back(std::move(j));
  }
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& s : summarize_ratios(rows)) {
    summary.push_back({{"label", s.label}, {"rows", s.rows}, {"mean_ratio", round6(s.mean_ratio)}});
  }
  return {{"schema", kCompareSchema}, {"rows", jrows}, {"summary", summary}};
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  if (options.repeats == 0) throw PreconditionError("repeats must be >= 1");
  std::vector<BenchRow> rows;
  for (const auto& shape : options.shapes) {
    const Filter4D filter = random_filter(shape, options.seed);
    {
      std::vector<double> times;
      double value = 0.0;
      for (std::size_t i = 0; i < options.repeats; ++i) {
        times.push_back(time_seconds([&] { value = compute_bound(filter, options.power).bound; }));
      }
      rows.push_back({shape.to_string(), "bound", std::nullopt, median(times), value, "ok"});
    }
    for (std::size_t n : options.n_list) {
      for (ExactMethod method : options.methods) {
        BenchRow row{shape.to_string(), exact_method_name(method), n, 0.0, 0.0, "ok"};
        if (method == ExactMethod::kOracle &&
            jacobian_entries(shape, n) > options.jacobian_cap) {
          row.status = "size-cap";
          rows.push_back(row);
          continue;
        }
        std::vector<double> times;
        for (std::size_t i = 0; i < options.repeats; ++i) {
          const auto run = run_exact(filter, n, method, options.power,
                                     options.jacobian_cap, options.workers);
          times.push_back(run.seconds);
          row.value = run.sigma;
        }
        row.median_seconds = median(times);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bench_csv_header() { return "shape,method,n,median_seconds,value,status"; }

std::string bench_csv_row(const BenchRow& row) {
  std::ostringstream os;
  os << row.shape << ',' << row.method << ','
     << (row.n ? std::to_string(*row.n) : "") << ',' << g6(row.median_seconds) << ','
     << (row.status == "ok" ? g6(row.value) : "") << ',' << row.status;
  return os.str();
}

nlohmann::json bench_json(const std::vector<BenchRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    out.push_back({{"shape", row.shape},
                   {"method", row.method},
                   {"n", row.n ? nlohmann::json(*row.n) : nlohmann::json(nullptr)},
                   {"median_seconds", row.median_seconds},
                   {"value", row.status == "ok" ? nlohmann::json(round6(row.value))
                                                : nlohmann::json(nullptr)},
                   {"status", row.status}});
  }
  return {{"schema", kBenchSchema},
          {"note", "single-process CPU timings of direct-summation and "
                   "direct-DFT reference code; not comparable to GPU kernels"},
          {"rows", out}};
}

nlohmann::json gradcheck_json(const FilterShape& shape, const FiniteDiffReport& report,
                              double eps, double tol) {
  return {{"schema", kGradcheckSchema},
          {"dims", dims_json(shape)},
          {"eps", eps},
          {"tol", tol},
          {"max_abs_err", report.max_abs_err},
          {"worst_index", report.worst_index},
          {"gap_ok", report.gap_ok},
          {"nonsmooth", report.nonsmooth},
          {"passed", report.passed},
          {"hex", {{"max_abs_err", hex_double(report.max_abs_err)}}}};
}

}  // namespace convbound
