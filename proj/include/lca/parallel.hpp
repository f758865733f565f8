// Copyright 2026 The LCA Authors
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
#include <exception>
#include <functional>

namespace lca {

/// Worker pool size: the override if set, else LCA_THREADS, else hardware
/// concurrency. Always at least 1.
std::size_t worker_count();

/// Overrides the pool size for subsequent calls; 0 restores the default.
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, n) on the worker pool. Work items must write to
/// disjoint outputs. If any items throw, the exception of the lowest failing
/// index is rethrown after all workers join, so failures are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lca
