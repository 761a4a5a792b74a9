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
#include <atomic>
#include <barrier>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sinnamon/id_map.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/top_k.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

/// Scoring options shared by both engines.
struct ScoreOptions {
    Budget budget;
    std::uint32_t threads = 1;
};

/// Dense per-slot scores plus how many query coordinates were fully applied.
struct ScoringResult {
    std::vector<double> scores;
    std::size_t coords_processed = 0;
};

/// Query entry positions ordered by descending |value|, ties by ascending
/// coordinate.
inline std::vector<std::size_t> magnitude_order(const SparseVector& q) {
    std::vector<std::size_t> order(q.nnz());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(q.values[a]) > std::fabs(q.values[b]);
    });
    return order;
}

/// Query entry positions in ascending coordinate order.
inline std::vector<std::size_t> coordinate_order(const SparseVector& q) {
    std::vector<std::size_t> order(q.nnz());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    return order;
}

/// Drives coordinate-at-a-time scoring over `workers` threads.
///
/// For each query entry in `order`, every worker calls
/// apply(worker, entry_index) on its own share of the entry's list; a barrier
/// separates consecutive lists. The budget is checked once per completed list,
/// so all workers stop after the same prefix and the result does not depend
/// on the worker count. Returns the number of entries applied.
template <typename Apply>
std::size_t run_lists(const std::vector<std::size_t>& order, const ScoreOptions& opts, Apply&& apply) {
    Deadline deadline(opts.budget);
    std::size_t workers = std::max<std::uint32_t>(opts.threads, 1);
    if (workers == 1) {
        std::size_t done = 0;
        for (std::size_t e : order) {
            apply(std::size_t{0}, e);
            ++done;
            if (deadline.expired()) {
                break;
            }
        }
        return done;
    }
    std::size_t done = 0;
    bool stop = order.empty();
    auto on_phase = [&]() noexcept {
        ++done;
        if (done == order.size() || deadline.expired()) {
            stop = true;
        }
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(workers), on_phase);
    parallel_for(workers, [&](std::size_t w) {
        for (std::size_t i = 0; !stop; ++i) {
            apply(w, order[i]);
            sync.arrive_and_wait();
        }
    });
    return done;
}

/// Top-k over dense scores restricted to live slots, split into `threads`
/// slot ranges and merged. Dead slots are masked to -inf first.
inline std::vector<ScoredSlot> select_live(std::vector<double>& scores, const IdMap& ids, std::size_t k,
                                           std::uint32_t threads) {
    const double masked = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < scores.size(); ++s) {
        if (!ids.is_live(static_cast<Slot>(s))) {
            scores[s] = masked;
        }
    }
    std::size_t workers = std::max<std::uint32_t>(threads, 1);
    if (workers == 1) {
        return find_largest(scores, k);
    }
    auto ranges = split_range(scores.size(), workers);
    std::vector<std::vector<ScoredSlot>> parts(workers);
    parallel_for(workers, [&](std::size_t w) {
        std::span<const double> part(scores.data() + ranges[w].begin, ranges[w].size());
        parts[w] = find_largest(part, k, static_cast<Slot>(ranges[w].begin));
    });
    return merge_largest(parts, k);
}

/// Maps selected slots to external ids, ordered by descending score and
/// ascending external id among equal scores.
inline TopKResult to_result(const std::vector<ScoredSlot>& selected, const IdMap& ids) {
    TopKResult out;
    out.hits.reserve(selected.size());
    for (const auto& s : selected) {
        out.hits.push_back({ids.ext_of(s.slot), s.score});
    }
    std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) {
        return a.score > b.score || (a.score == b.score && a.id < b.id);
    });
    return out;
}

/// Re-scores candidate slots exactly against raw vectors from `store` and
/// keeps the best `k`. Candidates are fetched in slot order.
template <typename Store>
std::vector<ScoredSlot> rerank(const SparseVector& q, std::vector<ScoredSlot> candidates, std::size_t k,
                               const IdMap& ids, const Store& store) {
    std::sort(candidates.begin(), candidates.end(),
              [](const ScoredSlot& a, const ScoredSlot& b) { return a.slot < b.slot; });
    for (auto& c : candidates) {
        c.score = inner_product(q, store.fetch(ids.ext_of(c.slot)));
    }
    if (candidates.size() > k) {
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                          candidates.end(), ranks_before);
        candidates.resize(k);
    } else {
        std::sort(candidates.begin(), candidates.end(), ranks_before);
    }
    return candidates;
}

}  // namespace sinnamon
