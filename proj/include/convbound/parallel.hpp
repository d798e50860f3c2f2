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

#pragma once

#include <cstddef>
#include <functional>

namespace convbound {

/// Name of the environment variable that caps worker threads.
inline constexpr const char* kWorkersEnv = "CONVBOUND_WORKERS";

/// Worker count: CONVBOUND_WORKERS if set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
std::size_t default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
/// split into contiguous chunks; the first exception thrown is rethrown
/// after all workers join. workers == 0 means default_workers().
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

}  // namespace convbound
