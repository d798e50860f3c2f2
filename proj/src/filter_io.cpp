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

#include "convbound/filter_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "convbound/error.hpp"

namespace convbound {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'T', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4;

void put_u32(std::vector<unsigned char>& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(x >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<unsigned char>(bits >> (8 * i)));
  }
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= std::uint32_t{p[i]} << (8 * i);
  return x;
}

double get_f64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= std::uint64_t{p[i]} << (8 * i);
  return std::bit_cast<double>(x);
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

FilterFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? FilterFormat::kJson
                                     : FilterFormat::kBinary;
}

std::vector<unsigned char> encode_cft1(const Filter4D& filter) {
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kHeaderBytes + 8 * filter.size());
  const auto& s = filter.shape();
  for (std::size_t dim : {s.c_out, s.c_in, s.h, s.w}) {
    if (dim > UINT32_MAX) throw FormatError("filter dim exceeds uint32");
    put_u32(out, static_cast<std::uint32_t>(dim));
  }
  for (double x : filter.values()) put_f64(out, x);
  return out;
}

Filter4D decode_cft1(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kHeaderBytes ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("missing CFT1 magic/header");
  }
  const FilterShape shape{get_u32(bytes.data() + 4), get_u32(bytes.data() + 8),
                          get_u32(bytes.data() + 12),
                          get_u32(bytes.data() + 16)};
  const std::size_t payload = bytes.size() - kHeaderBytes;
  if (payload % 8 != 0 || payload / 8 != shape.size()) {
    throw IntegrityError("CFT1 header declares " + std::to_string(shape.size()) +
                         " values but payload holds " +
                         std::to_string(payload / 8) +
                         (payload % 8 ? " (+ a partial value)" : ""));
  }
  std::vector<double> values(shape.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = get_f64(bytes.data() + kHeaderBytes + 8 * i);
  }
  return Filter4D(shape, std::move(values));
}

std::string encode_filter_json(const Filter4D& filter) {
  const auto& s = filter.shape();
  nlohmann::json doc;
  doc["dims"] = {s.c_out, s.c_in, s.h, s.w};
  doc["values"] = std::vector<double>(filter.values().begin(),
                                      filter.values().end());
  return doc.dump();
}

Filter4D decode_filter_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("filter JSON does not parse: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("values") ||
      !doc["dims"].is_array() || !doc["values"].is_array()) {
    throw FormatError("filter JSON needs array fields 'dims' and 'values'");
  }
  const auto& dims = doc["dims"];
  if (dims.size() != 4) throw FormatError("filter JSON 'dims' needs 4 entries");
  std::size_t d[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!dims[i].is_number_unsigned()) {
      throw FormatError("filter JSON dims must be non-negative integers");
    }
    d[i] = dims[i].get<std::size_t>();
  }
  std::vector<double> values;
  values.reserve(doc["values"].size());
  for (const auto& v : doc["values"]) {
    if (!v.is_number()) {
      throw DomainError("filter JSON value is not a finite number");
    }
    values.push_back(v.get<double>());
  }
  const FilterShape shape{d[0], d[1], d[2], d[3]};
  if (values.size() != shape.size()) {
    throw IntegrityError("filter JSON declares " + std::to_string(shape.size()) +
                         " values but holds " + std::to_string(values.size()));
  }
  return Filter4D(shape, std::move(values));
}

Filter4D load_filter(const std::filesystem::path& path, FilterFormat format) {
  auto bytes = read_bytes(path);
  if (format == FilterFormat::kBinary) return decode_cft1(bytes);
  return decode_filter_json(std::string(bytes.begin(), bytes.end()));
}

Filter4D load_filter(const std::filesystem::path& path) {
  return load_filter(path, format_from_path(path));
}

void save_filter(const Filter4D& filter, const std::filesystem::path& path,
                 FilterFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (format == FilterFormat::kBinary) {
    const auto bytes = encode_cft1(filter);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    out << encode_filter_json(filter);
  }
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace convbound
