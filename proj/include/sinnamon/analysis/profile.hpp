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

#include <span>
#include <vector>

#include "sinnamon/analysis/simulation.hpp"
#include "sinnamon/bfloat16.hpp"
#include "sinnamon/sinnamon_index.hpp"
#include "sinnamon/storage.hpp"

namespace sinnamon::analysis {

/// Errors measured on an indexed collection.
struct ErrorProfile {
    /// Decoded upper bound minus the true value, per live (slot, coordinate).
    ErrorSamples upper;
    /// Decoded lower bound minus the true value; empty for non-negative
    /// indexes.
    ErrorSamples lower;
    /// Sketch score minus exact inner product, per (query, document) pair
    /// sharing at least one coordinate.
    ErrorSamples inner_product;
    /// Mean active-coordinate count of the indexed vectors.
    double mean_nnz = 0.0;
};

/// Measures sketch and inner-product errors directly from the data.
///
/// The true value is taken after the directed bfloat16 rounding the sketch
/// applies; a coordinate no other coordinate overwrote has error zero.
inline ErrorProfile empirical_error_profile(SinnamonIndex& index, const VectorStore& store,
                                            std::span<const SparseVector> queries = {}) {
    ErrorProfile out;
    const IdMap& ids = index.id_map();
    const bool nonneg = index.config().nonneg;
    std::vector<double> up;
    std::vector<double> lo;
    std::size_t live = 0;
    std::size_t total_nnz = 0;
    for (std::size_t s = 0; s < ids.slot_capacity(); ++s) {
        auto slot = static_cast<Slot>(s);
        if (!ids.is_live(slot)) {
            continue;
        }
        const SparseVector& v = store.fetch(ids.ext_of(slot));
        ++live;
        total_nnz += v.nnz();
        for (std::size_t i = 0; i < v.nnz(); ++i) {
            const float x = v.values[i];
            up.push_back(static_cast<double>(index.decode(slot, v.coords[i], Sign::Positive)) -
                         static_cast<double>(bf16_to_float(bf16_round_up(x))));
            if (!nonneg) {
                lo.push_back(static_cast<double>(index.decode(slot, v.coords[i], Sign::Negative)) -
                             static_cast<double>(bf16_to_float(bf16_round_down(x))));
            }
        }
    }
    out.mean_nnz = live == 0 ? 0.0 : static_cast<double>(total_nnz) / static_cast<double>(live);
    out.upper = ErrorSamples(std::move(up));
    out.lower = ErrorSamples(std::move(lo));

    std::vector<double> ip;
    for (const auto& q : queries) {
        auto scored = index.score(q, ScoreOptions{});
        for (std::size_t s = 0; s < ids.slot_capacity(); ++s) {
            auto slot = static_cast<Slot>(s);
            if (!ids.is_live(slot)) {
                continue;
            }
            const SparseVector& v = store.fetch(ids.ext_of(slot));
            bool shared = false;
            for (std::size_t a = 0, b = 0; a < q.nnz() && b < v.nnz() && !shared;) {
                if (q.coords[a] == v.coords[b]) {
                    shared = true;
                } else if (q.coords[a] < v.coords[b]) {
                    ++a;
                } else {
                    ++b;
                }
            }
            if (shared) {
                ip.push_back(scored.scores[s] - inner_product(q, v));
            }
        }
    }
    out.inner_product = ErrorSamples(std::move(ip));
    return out;
}

}  // namespace sinnamon::analysis
