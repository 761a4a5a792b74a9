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
#include <vector>

#include "sinnamon/bfloat16.hpp"
#include "sinnamon/id_map.hpp"
#include "sinnamon/id_set.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/retrieval.hpp"
#include "sinnamon/sketch.hpp"
#include "sinnamon/top_k.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

enum class Sign { Positive, Negative };

/// Work counters, cumulative over the index lifetime.
struct SinnamonCounters {
    std::uint64_t idset_inserts = 0;
    std::uint64_t idset_removals = 0;
    std::uint64_t sketch_cells_written = 0;
    std::uint64_t sketch_cells_read = 0;
    std::uint64_t postings_scanned = 0;
};

/// Approximate engine: an id-only inverted index plus a sketch matrix that
/// holds, per slot, upper and lower bounds of the vector's values under
/// `mappings` random coordinate-to-row maps. Scores from the sketch never
/// underestimate the inner product; the best k' are re-ranked exactly.
///
/// With `nonneg` the lower half is omitted and negative query entries
/// contribute nothing, which is exact for non-negative documents.
class SinnamonIndex {
  public:
    explicit SinnamonIndex(const EngineConfig& config)
        : config_(checked(config)),
          maps_(config.rows, config.mappings, config.seed),
          sketch_(config.rows, config.nonneg),
          inv_(config.dims) {}

    void insert(const SparseVector& v) {
        v.validate(config_.dims);
        if (config_.nonneg) {
            for (float x : v.values) {
                if (x < 0.0F) {
                    throw InvalidArgument("vector " + std::to_string(v.id) +
                                          ": negative value in non-negative index");
                }
            }
        }
        Slot slot = ids_.assign(v.id);
        sketch_.ensure_columns(ids_.slot_capacity());
        sketch_.clear_column(slot);
        counters_.sketch_cells_written += sketch_.row_count();

        const float lowest = -std::numeric_limits<float>::infinity();
        const float highest = std::numeric_limits<float>::infinity();
        upper_acc_.assign(config_.rows, lowest);
        lower_acc_.assign(config_.rows, highest);
        touched_.clear();
        for (std::size_t i = 0; i < v.nnz(); ++i) {
            inv_[v.coords[i]].insert(slot);
            ++counters_.idset_inserts;
            for (std::uint32_t o = 0; o < config_.mappings; ++o) {
                std::uint32_t r = maps_.row(o, v.coords[i]);
                if (upper_acc_[r] == lowest) {
                    touched_.push_back(r);
                }
                upper_acc_[r] = std::max(upper_acc_[r], v.values[i]);
                lower_acc_[r] = std::min(lower_acc_[r], v.values[i]);
            }
        }
        for (std::uint32_t r : touched_) {
            sketch_.set_upper(r, slot, upper_acc_[r]);
            if (!config_.nonneg) {
                sketch_.set_lower(r, slot, lower_acc_[r]);
            }
        }
        counters_.sketch_cells_written += touched_.size() * (config_.nonneg ? 1 : 2);
    }

    /// Removes the slot from the id sets of the vector's active coordinates
    /// and recycles it. The sketch column is left as is until reuse. `v`
    /// must be the vector that was inserted under `v.id`.
    void erase(const SparseVector& v) {
        Slot slot = ids_.slot_of(v.id);
        for (Coord c : v.coords) {
            if (c < config_.dims && inv_[c].remove(slot)) {
                ++counters_.idset_removals;
            }
        }
        ids_.release(v.id);
    }

    /// Least upper bound (Positive) or greatest lower bound (Negative) of the
    /// value at coordinate `j` of the vector in `slot`.
    float decode(Slot slot, Coord j, Sign sign) const {
        if (sign == Sign::Negative && config_.nonneg) {
            return 0.0F;
        }
        float best = sign == Sign::Positive ? std::numeric_limits<float>::infinity()
                                            : -std::numeric_limits<float>::infinity();
        for (std::uint32_t o = 0; o < config_.mappings; ++o) {
            std::uint32_t r = maps_.row(o, j);
            best = sign == Sign::Positive ? std::min(best, sketch_.upper(r, slot))
                                          : std::max(best, sketch_.lower(r, slot));
        }
        return best;
    }

    /// Sketch scores for every slot: lists in descending |q[j]|, each slot in
    /// the list adding q[j] times the decoded bound matching the sign of
    /// q[j]. The budget is checked between lists.
    ScoringResult score(const SparseVector& q, const ScoreOptions& opts) {
        q.validate(config_.dims);
        ScoringResult out;
        out.scores.assign(ids_.slot_capacity(), 0.0);
        std::size_t workers = std::max<std::uint32_t>(opts.threads, 1);
        auto slot_ranges = split_range(ids_.slot_capacity(), workers);
        std::vector<std::uint64_t> scanned(workers, 0);

        std::vector<std::vector<const std::uint16_t*>> rows(q.nnz());
        std::vector<std::uint32_t> row_ids;
        for (std::size_t e = 0; e < q.nnz(); ++e) {
            maps_.rows_of(q.coords[e], row_ids);
            for (std::uint32_t r : row_ids) {
                rows[e].push_back(q.values[e] > 0.0F ? sketch_.upper_row(r)
                                  : config_.nonneg   ? nullptr
                                                     : sketch_.lower_row(r));
            }
        }

        double* scores = out.scores.data();
        out.coords_processed = run_lists(magnitude_order(q), opts, [&](std::size_t w, std::size_t e) {
            if (q.values[e] < 0.0F && config_.nonneg) {
                return;
            }
            const auto& list = inv_[q.coords[e]];
            Range range = slot_ranges[w];
            std::uint64_t n = 0;
            if (q.values[e] > 0.0F) {
                accumulate<Sign::Positive>(list, rows[e], q.values[e], range, scores, n);
            } else {
                accumulate<Sign::Negative>(list, rows[e], q.values[e], range, scores, n);
            }
            scanned[w] += n;
        });
        for (auto n : scanned) {
            counters_.postings_scanned += n;
            counters_.sketch_cells_read += n * config_.mappings;
        }
        return out;
    }

    /// Top k' by sketch score, exact re-scoring from `store`, top k.
    template <typename Store>
    TopKResult rank(const SparseVector& q, std::vector<double>& scores, const QueryParams& params,
                    const Store& store) const {
        params.validate();
        auto pool = select_live(scores, ids_, params.k_prime, params.threads);
        return to_result(rerank(q, std::move(pool), params.k, ids_, store), ids_);
    }

    template <typename Store>
    TopKResult retrieve(const SparseVector& q, const QueryParams& params, const Store& store) {
        params.validate();
        auto scored = score(q, ScoreOptions{params.budget, params.threads});
        return rank(q, scored.scores, params, store);
    }

    template <typename Store>
    TopKResult search(const SparseVector& q, const QueryParams& params, const Store& store) {
        return retrieve(q, params, store);
    }

    const EngineConfig& config() const noexcept { return config_; }
    std::uint32_t dims() const noexcept { return config_.dims; }
    std::size_t size() const noexcept { return ids_.live_count(); }
    const IdMap& id_map() const noexcept { return ids_; }
    const HashMappings& mappings() const noexcept { return maps_; }
    const SketchMatrix& sketch() const noexcept { return sketch_; }
    const std::vector<CompressedIdSet>& inverted() const noexcept { return inv_; }
    const SinnamonCounters& counters() const noexcept { return counters_; }

    std::size_t memory_bytes() const {
        std::size_t bytes = sketch_.memory_bytes();
        for (const auto& s : inv_) {
            bytes += s.memory_bytes();
        }
        return bytes;
    }

    static SinnamonIndex restore(const EngineConfig& config, IdMap ids, std::vector<CompressedIdSet> inv,
                                 SketchMatrix sketch) {
        SinnamonIndex index(config);
        if (inv.size() != config.dims || sketch.rows() != config.rows || sketch.nonneg() != config.nonneg ||
            sketch.columns() != ids.slot_capacity()) {
            throw IndexFormatError("sinnamon: inconsistent index sections");
        }
        index.ids_ = std::move(ids);
        index.inv_ = std::move(inv);
        index.sketch_ = std::move(sketch);
        return index;
    }

  private:
    static const EngineConfig& checked(const EngineConfig& config) {
        config.validate_for_sketch();
        return config;
    }

    template <Sign S>
    static void accumulate(const CompressedIdSet& list, const std::vector<const std::uint16_t*>& rows, float qv,
                           Range range, double* scores, std::uint64_t& n) {
        const double q = qv;
        if (rows.size() == 1) {
            const std::uint16_t* row = rows[0];
            list.for_each_in_range(range.begin, range.end, [&](std::uint32_t slot) {
                scores[slot] += q * static_cast<double>(bf16_to_float(row[slot]));
                ++n;
            });
            return;
        }
        list.for_each_in_range(range.begin, range.end, [&](std::uint32_t slot) {
            float best = bf16_to_float(rows[0][slot]);
            for (std::size_t o = 1; o < rows.size(); ++o) {
                float v = bf16_to_float(rows[o][slot]);
                if constexpr (S == Sign::Positive) {
                    best = std::min(best, v);
                } else {
                    best = std::max(best, v);
                }
            }
            scores[slot] += q * static_cast<double>(best);
            ++n;
        });
    }

    EngineConfig config_;
    HashMappings maps_;
    SketchMatrix sketch_;
    std::vector<CompressedIdSet> inv_;
    IdMap ids_;
    SinnamonCounters counters_;

    std::vector<float> upper_acc_;
    std::vector<float> lower_acc_;
    std::vector<std::uint32_t> touched_;
};

}  // namespace sinnamon
