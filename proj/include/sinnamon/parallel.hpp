// Copyright 2026-present the sinnamon project
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
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sinnamon {

/// Half-open range [begin, end).
struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
};

/// Splits [0, total) into `parts` contiguous ranges of size ceil(total/parts)
/// (the last ones may be shorter or empty).
inline std::vector<Range> split_range(std::size_t total, std::size_t parts) {
    parts = parts == 0 ? 1 : parts;
    std::size_t chunk = (total + parts - 1) / parts;
    std::vector<Range> out(parts);
    for (std::size_t w = 0; w < parts; ++w) {
        std::size_t b = std::min(total, w * chunk);
        std::size_t e = std::min(total, b + chunk);
        out[w] = {b, e};
    }
    return out;
}

/// Runs fn(worker) for worker in [0, workers). Worker 0 runs on the calling
/// thread. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::size_t workers, Fn&& fn) {
    if (workers <= 1) {
        fn(std::size_t{0});
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    auto guarded = [&](std::size_t w) {
        try {
            fn(w);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            pool.emplace_back(guarded, w);
        }
        guarded(0);
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace sinnamon
