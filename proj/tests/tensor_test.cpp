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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "convbound/error.hpp"
#include "convbound/filter_io.hpp"
#include "convbound/random.hpp"
#include "convbound/tensor.hpp"

namespace convbound {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = CONVBOUND_FIXTURE_DIR;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("convbound_tensor_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

bool bitwise_equal(const Filter4D& a, const Filter4D& b) {
  return a.shape() == b.shape() &&
         std::memcmp(a.values().data(), b.values().data(), 8 * a.size()) == 0;
}

TEST(FilterShape, ParsesAndPrints) {
  EXPECT_EQ(parse_shape("64x16x3x3"), (FilterShape{64, 16, 3, 3}));
  EXPECT_EQ(parse_shape("1,2,3,4"), (FilterShape{1, 2, 3, 4}));
  EXPECT_EQ((FilterShape{2, 3, 1, 5}).to_string(), "2x3x1x5");
  EXPECT_THROW(parse_shape("1x2x3"), FormatError);
  EXPECT_THROW(parse_shape("1x0x3x3"), FormatError);
  EXPECT_THROW(parse_shape("1xax3x3"), FormatError);
}

TEST(Filter4D, RejectsBadConstruction) {
  EXPECT_THROW(Filter4D({1, 1, 1, 2}, {1.0}), IntegrityError);
  EXPECT_THROW(Filter4D({0, 1, 1, 1}, {}), IntegrityError);
  EXPECT_THROW(Filter4D({1, 1, 1, 1}, {std::numeric_limits<double>::quiet_NaN()}), DomainError);
  EXPECT_THROW(Filter4D({1, 1, 1, 1}, {std::numeric_limits<double>::infinity()}), DomainError);
}

TEST(Filter4D, FlatIndexIsRowMajor) {
  const FilterShape shape{2, 3, 4, 5};
  std::vector<double> values(shape.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
  const Filter4D f(shape, values);
  std::size_t expected = 0;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t d = 0; d < 3; ++d)
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 5; ++l) {
          EXPECT_EQ(f.flat_index(c, d, k, l), expected);
          EXPECT_EQ(f(c, d, k, l), static_cast<double>(expected));
          ++expected;
        }
}

TEST(DenseMatrix, ValidatesAndTransposes) {
  EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  EXPECT_THROW(DenseMatrix(1, 1, {std::nan("")}), DomainError);
  const DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  const auto t = m.transposed();
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t(2, 1), 6.0);
  EXPECT_DOUBLE_EQ(m.frobenius_norm(), std::sqrt(91.0));
}

TEST(InputGeometry, RequiresNAboveFilterSize) {
  EXPECT_NO_THROW(InputGeometry(4).require_fits({1, 1, 3, 3}));
  EXPECT_THROW(InputGeometry(3).require_fits({1, 1, 3, 1}), GeometryError);
  EXPECT_THROW(InputGeometry(3).require_fits({1, 1, 4, 1}), GeometryError);
}

TEST(LoadFilter, BinaryWorkedFilter) {
  const auto f = load_filter(kFixtures / "worked_1x1x1x3.cft1", FilterFormat::kBinary);
  EXPECT_EQ(f.shape(), (FilterShape{1, 1, 1, 3}));
  EXPECT_EQ(std::vector<double>(f.values().begin(), f.values().end()),
            (std::vector<double>{1.0, 2.0, -1.0}));
}

TEST(LoadFilter, JsonIdentity) {
  const auto f = decode_filter_json(R"({"dims":[1,1,1,1],"values":[1.0]})");
  EXPECT_EQ(f, Filter4D({1, 1, 1, 1}, {1.0}));
  const auto d = load_filter(kFixtures / "worked_1x1x1x3.json");
  EXPECT_EQ(d, Filter4D({1, 1, 1, 3}, {1.0, 2.0, -1.0}));
}

TEST(LoadFilter, ValueCountMismatchIsIntegrityError) {
  TempDir tmp;
  // Header declares 1x1x1x4 = 4 values, payload carries 3.
  auto bytes = encode_cft1(Filter4D({1, 1, 1, 3}, {1.0, 2.0, -1.0}));
  bytes[16] = 4;
  write_bytes(tmp / "short.cft1", bytes);
  EXPECT_THROW(load_filter(tmp / "short.cft1", FilterFormat::kBinary), IntegrityError);

  bytes.push_back(0);  // partial trailing value
  EXPECT_THROW(decode_cft1(bytes), IntegrityError);
  EXPECT_THROW(decode_filter_json(R"({"dims":[1,1,1,4],"values":[1,2,3]})"), IntegrityError);
}

TEST(LoadFilter, MalformedHeaderIsFormatError) {
  EXPECT_THROW(decode_cft1({'C', 'F', 'T', '2', 0, 0, 0, 0}), FormatError);
  EXPECT_THROW(decode_cft1({'C', 'F'}), FormatError);
  EXPECT_THROW(decode_filter_json("{\"dims\":[1,1,1,1]"), FormatError);
  EXPECT_THROW(decode_filter_json(R"({"dims":[1,1,1],"values":[1]})"), FormatError);
  EXPECT_THROW(decode_filter_json(R"([1,2])"), FormatError);
}

TEST(LoadFilter, NonFiniteIsDomainError) {
  auto bytes = encode_cft1(Filter4D({1, 1, 1, 1}, {1.0}));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(bytes.data() + 20, &nan, 8);  // little-endian host
  EXPECT_THROW(decode_cft1(bytes), DomainError);
  EXPECT_THROW(decode_filter_json(R"({"dims":[1,1,1,1],"values":[null]})"), DomainError);
}

TEST(LoadFilter, MissingFileIsIoError) {
  EXPECT_THROW(load_filter(kFixtures / "does_not_exist.cft1"), IoError);
}

TEST(SaveFilter, BinaryLayoutIsExact) {
  const auto bytes = encode_cft1(Filter4D({1, 1, 1, 3}, {1.0, 2.0, -1.0}));
  ASSERT_EQ(bytes.size(), 20u + 24u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "CFT1");
  const std::vector<unsigned char> dims(bytes.begin() + 4, bytes.begin() + 20);
  EXPECT_EQ(dims, (std::vector<unsigned char>{1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 3, 0, 0, 0}));
  // 1.0 = 0x3FF0000000000000, little-endian.
  EXPECT_EQ(bytes[20 + 7], 0x3F);
  EXPECT_EQ(bytes[20 + 6], 0xF0);
  std::ifstream in(kFixtures / "worked_1x1x1x3.cft1", std::ios::binary);
  const std::vector<unsigned char> fixture{std::istreambuf_iterator<char>(in), {}};
  EXPECT_EQ(bytes, fixture);
}

TEST(SaveFilter, RoundTripWorkedFilter) {
  TempDir tmp;
  const Filter4D f({1, 1, 1, 3}, {1.0, 2.0, -1.0});
  save_filter(f, tmp / "f.cft1", FilterFormat::kBinary);
  save_filter(f, tmp / "f.json", FilterFormat::kJson);
  EXPECT_TRUE(bitwise_equal(load_filter(tmp / "f.cft1"), f));
  EXPECT_TRUE(bitwise_equal(load_filter(tmp / "f.json"), f));
}

TEST(SaveFilter, RoundTripLargeNormalFilter) {
  TempDir tmp;
  const auto f = random_filter({64, 3, 7, 7}, 0);
  for (auto format : {FilterFormat::kBinary, FilterFormat::kJson}) {
    const auto path = tmp / (format == FilterFormat::kBinary ? "big.cft1" : "big.json");
    save_filter(f, path, format);
    EXPECT_TRUE(bitwise_equal(load_filter(path, format), f));
  }
}

// Round trip over generated shapes, seeds and both formats, including
// signed zeros and subnormals.
TEST(SaveFilter, RoundTripProperty) {
  TempDir tmp;
  Xoshiro256StarStar gen(7);
  for (int trial = 0; trial < 25; ++trial) {
    const FilterShape shape{1 + gen() % 4, 1 + gen() % 4, 1 + gen() % 5, 1 + gen() % 5};
    const auto base = random_filter(shape, gen());
    std::vector<double> values(base.values().begin(), base.values().end());
    values[0] = -0.0;
    if (values.size() > 1) values[1] = std::numeric_limits<double>::denorm_min();
    if (values.size() > 2) values[2] = std::numeric_limits<double>::max();
    const Filter4D f(shape, values);
    EXPECT_TRUE(bitwise_equal(decode_cft1(encode_cft1(f)), f));
    EXPECT_TRUE(bitwise_equal(decode_filter_json(encode_filter_json(f)), f));
    const auto path = tmp / ("t" + std::to_string(trial) + (trial % 2 ? ".json" : ".cft1"));
    save_filter(f, path, format_from_path(path));
    EXPECT_TRUE(bitwise_equal(load_filter(path), f));
  }
}

TEST(SaveFilter, UnwritablePathIsIoError) {
  const Filter4D f({1, 1, 1, 1}, {1.0});
  EXPECT_THROW(save_filter(f, "/nonexistent_dir_for_convbound/f.cft1", FilterFormat::kBinary),
               IoError);
}

TEST(RandomFilter, DeterministicForSeed) {
  EXPECT_TRUE(bitwise_equal(random_filter({3, 2, 3, 3}, 5), random_filter({3, 2, 3, 3}, 5)));
  EXPECT_FALSE(bitwise_equal(random_filter({3, 2, 3, 3}, 5), random_filter({3, 2, 3, 3}, 6)));
  const auto one = random_filter({1, 1, 1, 1}, 123);
  EXPECT_TRUE(std::isfinite(one.values()[0]));
}

TEST(RandomFilter, MatchesShippedFixtures) {
  EXPECT_TRUE(bitwise_equal(random_filter({2, 3, 3, 3}, 0),
                            load_filter(kFixtures / "normal_2x3x3x3_seed0.cft1")));
  EXPECT_TRUE(bitwise_equal(random_filter({1, 1, 2, 4}, 42),
                            load_filter(kFixtures / "normal_1x1x2x4_seed42.json")));
}

TEST(RandomFilter, StandardNormalMoments) {
  const auto f = random_filter({64, 64, 3, 3}, 0);
  ASSERT_EQ(f.size(), 36864u);
  double mean = 0.0;
  for (double x : f.values()) mean += x;
  mean /= static_cast<double>(f.size());
  double var = 0.0;
  for (double x : f.values()) var += (x - mean) * (x - mean);
  var /= static_cast<double>(f.size() - 1);
  const double count = static_cast<double>(f.size());
  EXPECT_LE(std::abs(mean), 0.02);
  EXPECT_LE(std::abs(mean), 5.0 / std::sqrt(count));
  EXPECT_LE(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / count));
}

TEST(NormalSampler, UniformStaysInsideOpenInterval) {
  NormalSampler s(99);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace convbound
