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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sinnamon/types.hpp"

namespace sinnamon {

struct ScoredSlot {
    Slot slot = 0;
    double score = 0.0;

    friend bool operator==(const ScoredSlot&, const ScoredSlot&) = default;
};

/// Total order used for selection: higher score first, then lower slot.
inline bool ranks_before(const ScoredSlot& a, const ScoredSlot& b) noexcept {
    return a.score > b.score || (a.score == b.score && a.slot < b.slot);
}

/// Heap-based selection of the `k` largest scores.
///
/// A slot enters the heap only when its score is strictly greater than the
/// threshold, which is the value last evicted from the heap (initially -inf).
/// Among equal scores the later-scanned slot is evicted first, so boundary
/// ties keep the earliest slots. Slots scoring -inf are never admitted; that
/// is how callers mask out dead slots.
///
/// `first_slot` is the slot number of `scores[0]`, for selecting within a
/// sub-range. The result is ordered by `ranks_before`.
inline std::vector<ScoredSlot> find_largest(std::span<const double> scores, std::size_t k,
                                            Slot first_slot = 0) {
    std::vector<ScoredSlot> heap;
    if (k == 0 || scores.empty()) {
        return heap;
    }
    heap.reserve(std::min(k, scores.size()) + 1);
    // With ranks_before as the comparator the heap top is the entry ranked last.
    double threshold = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > threshold) {
            heap.push_back({static_cast<Slot>(first_slot + i), scores[i]});
            std::push_heap(heap.begin(), heap.end(), ranks_before);
            if (heap.size() > k) {
                std::pop_heap(heap.begin(), heap.end(), ranks_before);
                threshold = heap.back().score;
                heap.pop_back();
            }
        }
    }
    std::sort_heap(heap.begin(), heap.end(), ranks_before);
    return heap;
}

/// Merges per-range selections into the selection over the union of the
/// ranges. Equal to `find_largest` over the concatenated scores.
inline std::vector<ScoredSlot> merge_largest(const std::vector<std::vector<ScoredSlot>>& parts,
                                             std::size_t k) {
    std::vector<ScoredSlot> all;
    for (const auto& p : parts) {
        all.insert(all.end(), p.begin(), p.end());
    }
    if (all.size() > k) {
        std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                          ranks_before);
        all.resize(k);
    } else {
        std::sort(all.begin(), all.end(), ranks_before);
    }
    return all;
}

}  // namespace sinnamon
