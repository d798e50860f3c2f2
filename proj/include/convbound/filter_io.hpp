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

// Filter files.
//
// CFT1 binary layout:
//   bytes 0..3   magic "CFT1"
//   bytes 4..19  c_out, c_in, h, w as little-endian uint32
//   then         c_out*c_in*h*w little-endian IEEE-754 binary64, row-major
//
// JSON layout: {"dims": [c_out, c_in, h, w], "values": [...]}.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "convbound/tensor.hpp"

namespace convbound {

enum class FilterFormat { kBinary, kJson };

/// Picks kJson for a ".json" extension and kBinary otherwise.
FilterFormat format_from_path(const std::filesystem::path& path);

Filter4D load_filter(const std::filesystem::path& path, FilterFormat format);
Filter4D load_filter(const std::filesystem::path& path);
void save_filter(const Filter4D& filter, const std::filesystem::path& path,
                 FilterFormat format);

std::vector<unsigned char> encode_cft1(const Filter4D& filter);
Filter4D decode_cft1(const std::vector<unsigned char>& bytes);
std::string encode_filter_json(const Filter4D& filter);
Filter4D decode_filter_json(const std::string& text);

}  // namespace convbound
