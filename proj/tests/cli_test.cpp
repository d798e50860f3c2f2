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

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "convbound/filter_io.hpp"
#include "convbound/tensor.hpp"

namespace convbound {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kCli = CONVBOUND_CLI;
const fs::path kFixtures = CONVBOUND_FIXTURE_DIR;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const char* name) { return "'" + (kFixtures / name).string() + "'"; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "convbound_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, BoundOnWorkedFilter) {
  const auto r = run("bound " + fixture("worked_1x1x1x3.cft1"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["bound"].get<double>(), 4.24264);
  EXPECT_EQ(j["argmin"], "R");
  EXPECT_EQ(j["schema"], "convbound.bound/1");

  const auto from_json = run("bound " + fixture("worked_1x1x1x3.json"));
  ASSERT_EQ(from_json.code, 0);
  EXPECT_EQ(from_json.out, r.out);
}

TEST(Cli, BoundCsv) {
  const auto r = run("bound " + fixture("worked_1x1x1x3.cft1") + " --csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "dims,scaled_r,scaled_s,scaled_t,scaled_u,bound,argmin,converged\n"
            "1x1x1x3,4.24264,4.24264,4.24264,4.24264,4.24264,R,true\n");
}

TEST(Cli, ExactMethodsOnWorkedFilter) {
  for (const char* method : {"fft", "matfree", "oracle"}) {
    const auto r = run("exact " + fixture("worked_1x1x1x3.cft1") + " --n 5 --method " + method);
    ASSERT_EQ(r.code, 0) << method;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["sigma"].get<double>(), 2.76008) << method;
    EXPECT_EQ(j["method"], method);
    EXPECT_FALSE(j.contains("seconds"));
  }
}

TEST(Cli, OutputIsReproducible) {
  const std::string args[] = {
      "bound " + fixture("normal_2x3x3x3_seed0.cft1"),
      "exact " + fixture("normal_2x3x3x3_seed0.cft1") + " --n 8",
      "exact " + fixture("normal_2x3x3x3_seed0.cft1") + " --n 8 --method matfree",
      "gradcheck " + fixture("normal_1x1x2x4_seed42.json"),
  };
  for (const auto& a : args) {
    const auto first = run(a);
    ASSERT_EQ(first.code, 0) << a;
    EXPECT_EQ(run(a).out, first.out) << a;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("bound '" + scratch("missing.cft1").string() + "'").code, 2);
  EXPECT_EQ(run("bound").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("exact " + fixture("worked_1x1x1x3.cft1") + " --n 2").code, 2);
  EXPECT_EQ(run("exact " + fixture("worked_1x1x1x3.cft1") + " --n 5 --method svd").code, 2);

  const auto big = scratch("big.cft1");
  ASSERT_EQ(run("random --dims 64x64x3x3 --seed 0 --out '" + big.string() + "'").code, 0);
  EXPECT_EQ(run("exact '" + big.string() + "' --n 64 --method oracle").code, 3);
  EXPECT_EQ(run("exact " + fixture("worked_1x1x1x3.cft1") +
                " --n 5 --method oracle --jacobian-cap 100")
                .code,
            3);
}

TEST(Cli, RandomFilterHasSpreadBranches) {
  const auto path = scratch("random64.cft1");
  ASSERT_EQ(run("random --dims 64x64x3x3 --seed 0 --out '" + path.string() + "'").code, 0);
  const auto f = load_filter(path);
  EXPECT_EQ(f.shape(), (FilterShape{64, 64, 3, 3}));

  const auto r = run("bound '" + path.string() + "'");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  double lo = 1e300, hi = 0.0;
  for (const auto& [name, v] : j["scaled_norms"].items()) {
    lo = std::min(lo, v.get<double>());
    hi = std::max(hi, v.get<double>());
  }
  EXPECT_GT(hi - lo, 1.0);
  EXPECT_EQ(j["bound"].get<double>(), lo);

  const auto again = scratch("random64_again.cft1");
  ASSERT_EQ(run("random --dims 64x64x3x3 --seed 0 --out '" + again.string() + "'").code, 0);
  EXPECT_EQ(load_filter(again), f);
}

TEST(Cli, DumpJacobian) {
  const auto path = scratch("jac.csv");
  const auto r = run("exact " + fixture("worked_1x1x1x3.cft1") +
                     " --n 5 --method oracle --dump-jacobian '" + path.string() + "'");
  ASSERT_EQ(r.code, 0);
  std::ifstream in(path);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 24);
    ++rows;
  }
  EXPECT_EQ(rows, 25u);
}

TEST(Cli, Gradcheck) {
  const auto r = run("gradcheck " + fixture("worked_1x1x1x3.cft1"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["schema"], "convbound.gradcheck/1");
  EXPECT_EQ(run("gradcheck " + fixture("worked_1x1x1x3.cft1") + " --eps 0").code, 2);
}

TEST(Cli, Compare) {
  const auto manifest = scratch("manifest.json");
  std::ofstream(manifest) << R"([{"dims":[3,2,1,1],"n":4,"label":"pointwise"},)"
                          << R"({"path":")" << (kFixtures / "worked_1x1x1x3.cft1").string()
                          << R"(","n":5}])";
  const auto r = run("compare '" + manifest.string() + "' --seeds 2");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 3u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(j["rows"][i]["ratio"].get<double>(), 1.0, 1e-5);
  EXPECT_EQ(j["rows"][2]["exact_fft"].get<double>(), 2.76008);

  const auto csv = run("compare '" + manifest.string() + "' --seeds 2 --csv --matfree");
  ASSERT_EQ(csv.code, 0);
  std::istringstream in(csv.out);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 16) << line;
    ++lines;
  }
  EXPECT_EQ(lines, 4u);
}

TEST(Cli, Bench) {
  const auto r = run("bench --shapes 2x2x3x3 --n-list 8,16 --repeats 1 --methods fft,oracle --csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "shape,method,n,median_seconds,value,status");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("2x2x3x3,bound,,", 0), 0u) << line;
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5u);
  EXPECT_EQ(run("bench --repeats 0").code, 2);
}

TEST(Cli, Regdemo) {
  const auto config = scratch("regdemo.json");
  const auto out = scratch("trace.csv");
  std::ofstream(config) << R"({"steps":30,"beta":0.1,"seed":0})";
  const auto r = run("regdemo '" + config.string() + "' --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step,loss,bound,exact");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 31u);

  std::ofstream(config) << R"({"steps":30,"betta":0.1})";
  EXPECT_EQ(run("regdemo '" + config.string() + "'").code, 2);
  std::ofstream(config) << R"({"steps":500,"lr":200,"beta":0})";
  EXPECT_EQ(run("regdemo '" + config.string() + "' --out '" + out.string() + "'").code, 1);
}

}  // namespace
}  // namespace convbound
