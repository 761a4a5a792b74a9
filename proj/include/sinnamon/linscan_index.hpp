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
#include <vector>

#include "sinnamon/id_map.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/posting_list.hpp"
#include "sinnamon/retrieval.hpp"
#include "sinnamon/top_k.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

/// Work counters, cumulative over the index lifetime.
struct LinScanCounters {
    std::uint64_t postings_inserted = 0;
    std::uint64_t postings_removed = 0;
    std::uint64_t postings_scanned = 0;
};

/// Exact coordinate-at-a-time engine over per-coordinate posting lists.
///
/// `PostingList` is RawPostingList (32-bit values, insertion order) or
/// CompressedPostingList (compressed ids, bfloat16 values).
template <typename PostingList>
class LinScanIndex {
  public:
    using list_type = PostingList;

    explicit LinScanIndex(std::uint32_t dims) : dims_(dims), lists_(dims) {
        if (dims < 1) {
            throw InvalidArgument("dims must be >= 1");
        }
    }

    void insert(const SparseVector& v) {
        v.validate(dims_);
        Slot slot = ids_.assign(v.id);
        for (std::size_t i = 0; i < v.nnz(); ++i) {
            lists_[v.coords[i]].append(slot, v.values[i]);
        }
        counters_.postings_inserted += v.nnz();
    }

    /// Full deletion: removes the vector's postings from the lists of all its
    /// active coordinates, then releases its slot. `v` must be the vector
    /// that was inserted under `v.id`.
    void erase(const SparseVector& v) {
        Slot slot = ids_.slot_of(v.id);
        for (Coord c : v.coords) {
            if (c < dims_ && lists_[c].remove(slot)) {
                ++counters_.postings_removed;
            }
        }
        ids_.release(v.id);
    }

    /// Accumulates q[j] * x[j] into a dense per-slot array, one list at a
    /// time. `order` selects the list order; the budget is checked between
    /// lists.
    ScoringResult score(const SparseVector& q, const std::vector<std::size_t>& order,
                        const ScoreOptions& opts) {
        q.validate(dims_);
        ScoringResult out;
        out.scores.assign(ids_.slot_capacity(), 0.0);
        double* scores = out.scores.data();
        std::size_t workers = std::max<std::uint32_t>(opts.threads, 1);
        auto slot_ranges = split_range(ids_.slot_capacity(), workers);
        std::vector<std::uint64_t> scanned(workers, 0);

        out.coords_processed = run_lists(order, opts, [&](std::size_t w, std::size_t e) {
            const PostingList& list = lists_[q.coords[e]];
            const double qv = q.values[e];
            std::uint64_t n = 0;
            auto add = [&](Slot slot, float value) {
                scores[slot] += qv * static_cast<double>(value);
                ++n;
            };
            if constexpr (PostingList::kSortedBySlot) {
                list.for_each_in_slot_range(slot_ranges[w].begin, slot_ranges[w].end, add);
            } else {
                Range seg = split_range(list.size(), workers)[w];
                list.for_each_position(seg.begin, seg.end, add);
            }
            scanned[w] += n;
        });
        for (auto n : scanned) {
            counters_.postings_scanned += n;
        }
        return out;
    }

    /// Exact top-k. Lists are applied in ascending coordinate order, so every
    /// score is bitwise equal to `inner_product` against the stored values.
    TopKResult retrieve(const SparseVector& q, std::size_t k, std::uint32_t threads = 1) {
        check_k(k);
        ScoreOptions opts{Budget::infinite(), threads};
        auto scored = score(q, coordinate_order(q), opts);
        return to_result(select_live(scored.scores, ids_, k, threads), ids_);
    }

    /// Anytime top-k: lists in descending |q[j]| until the budget expires,
    /// then the best k' partial scores are re-scored exactly from `store`.
    template <typename Store>
    TopKResult retrieve_anytime(const SparseVector& q, const QueryParams& params, const Store& store) {
        params.validate();
        ScoreOptions opts{params.budget, params.threads};
        auto scored = score(q, magnitude_order(q), opts);
        auto pool = select_live(scored.scores, ids_, params.k_prime, params.threads);
        return to_result(rerank(q, std::move(pool), params.k, ids_, store), ids_);
    }

    /// Exact retrieval under an infinite budget, anytime retrieval otherwise.
    template <typename Store>
    TopKResult search(const SparseVector& q, const QueryParams& params, const Store& store) {
        params.validate();
        if (params.budget.is_infinite()) {
            return retrieve(q, params.k, params.threads);
        }
        return retrieve_anytime(q, params, store);
    }

    std::uint32_t dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return ids_.live_count(); }
    const IdMap& id_map() const noexcept { return ids_; }
    const std::vector<PostingList>& lists() const noexcept { return lists_; }
    const PostingList& list(Coord c) const { return lists_.at(c); }
    const LinScanCounters& counters() const noexcept { return counters_; }

    std::size_t memory_bytes() const {
        std::size_t bytes = 0;
        for (const auto& l : lists_) {
            bytes += l.memory_bytes();
        }
        return bytes;
    }

    static LinScanIndex restore(std::uint32_t dims, IdMap ids, std::vector<PostingList> lists) {
        if (lists.size() != dims) {
            throw IndexFormatError("linscan: list count does not match dims");
        }
        LinScanIndex index(dims);
        index.ids_ = std::move(ids);
        index.lists_ = std::move(lists);
        return index;
    }

  private:
    static void check_k(std::size_t k) {
        if (k < 1) {
            throw InvalidArgument("k must be >= 1");
        }
    }

    std::uint32_t dims_;
    std::vector<PostingList> lists_;
    IdMap ids_;
    LinScanCounters counters_;
};

using RawLinScan = LinScanIndex<RawPostingList>;
using CompressedLinScan = LinScanIndex<CompressedPostingList>;

}  // namespace sinnamon
