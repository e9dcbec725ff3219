// Copyright 2026 The qistate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace qistate {

/// Number of worker threads used by group averages. QISTATE_THREADS
/// overrides the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) across workers. Each index is visited
/// exactly once; body must only write to index-owned state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Deterministic sum of term(0) + ... + term(count - 1).
///
/// Indices are cut into fixed blocks of kBlock terms; each block is summed
/// left to right, and block sums are combined by a pairwise tree in index
/// order. The partition never depends on the worker count, so the result is
/// bit-identical for any number of threads.
template <typename T, typename Term>
T tree_sum(std::size_t count, const T& zero_value, Term&& term) {
    constexpr std::size_t kBlock = 16;
    if (count == 0) return zero_value;
    const std::size_t blocks = (count + kBlock - 1) / kBlock;
    std::vector<T> partial(blocks, zero_value);
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(count, lo + kBlock);
        T acc = term(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
        partial[b] = std::move(acc);
    });
    for (std::size_t stride = 1; stride < blocks; stride *= 2) {
        for (std::size_t i = 0; i + stride < blocks; i += 2 * stride) {
            partial[i] += partial[i + stride];
        }
    }
    return std::move(partial[0]);
}

}  // namespace qistate
