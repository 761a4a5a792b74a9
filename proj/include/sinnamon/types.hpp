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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sinnamon/error.hpp"

namespace sinnamon {

using ExternalId = std::uint64_t;
using Slot = std::uint32_t;
using Coord = std::uint32_t;

/// A sparse vector: an external id plus (coordinate, value) entries stored as
/// two parallel arrays. Coordinates are strictly increasing and values are
/// finite and nonzero; `validate` checks this.
struct SparseVector {
    ExternalId id = 0;
    std::vector<Coord> coords;
    std::vector<float> values;

    SparseVector() = default;
    SparseVector(ExternalId ext_id, std::vector<Coord> cs, std::vector<float> vs)
        : id(ext_id), coords(std::move(cs)), values(std::move(vs)) {}

    std::size_t nnz() const noexcept { return coords.size(); }
    bool empty() const noexcept { return coords.empty(); }

    /// Value at `coord`, or 0 when the coordinate is inactive.
    float at(Coord coord) const noexcept {
        auto it = std::lower_bound(coords.begin(), coords.end(), coord);
        if (it == coords.end() || *it != coord) {
            return 0.0F;
        }
        return values[static_cast<std::size_t>(it - coords.begin())];
    }

    /// Throws InvalidArgument when an invariant is broken. `dims` of 0 skips the
    /// dimensionality check.
    void validate(std::uint32_t dims = 0) const {
        if (coords.size() != values.size()) {
            throw InvalidArgument("vector " + std::to_string(id) + ": coords/values length mismatch");
        }
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (i > 0 && coords[i] <= coords[i - 1]) {
                throw InvalidArgument("vector " + std::to_string(id) +
                                      ": coordinates not strictly increasing");
            }
            if (dims != 0 && coords[i] >= dims) {
                throw InvalidArgument("vector " + std::to_string(id) + ": coordinate " +
                                      std::to_string(coords[i]) + " out of range");
            }
            if (!std::isfinite(values[i]) || values[i] == 0.0F) {
                throw InvalidArgument("vector " + std::to_string(id) +
                                      ": values must be finite and nonzero");
            }
        }
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Exact inner product over the intersection of active coordinates,
/// accumulated in double precision in ascending coordinate order.
inline double inner_product(const SparseVector& a, const SparseVector& b) noexcept {
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.coords.size() && j < b.coords.size()) {
        if (a.coords[i] == b.coords[j]) {
            sum += static_cast<double>(a.values[i]) * static_cast<double>(b.values[j]);
            ++i;
            ++j;
        } else if (a.coords[i] < b.coords[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

/// Engine construction parameters. `rows` and `mappings` are used by the
/// sketch engine only; `nonneg` selects the upper-bound-only variant.
struct EngineConfig {
    std::uint32_t dims = 0;
    std::uint32_t rows = 0;
    std::uint32_t mappings = 1;
    std::uint64_t seed = 0;
    bool nonneg = false;

    void validate_for_sketch() const {
        if (dims < 1 || rows < 1 || mappings < 1) {
            throw InvalidArgument("sketch engine requires dims, rows and mappings >= 1");
        }
    }
};

/// Scoring time budget; an empty budget is unlimited.
class Budget {
  public:
    Budget() = default;
    static Budget infinite() { return Budget(); }
    static Budget millis(double ms) {
        if (!(ms >= 0.0)) {
            throw InvalidArgument("budget must be non-negative");
        }
        Budget b;
        b.ms_ = ms;
        return b;
    }

    bool is_infinite() const noexcept { return !ms_.has_value(); }
    double ms() const noexcept { return ms_.value_or(std::numeric_limits<double>::infinity()); }

  private:
    std::optional<double> ms_;
};

/// Monotonic-clock deadline started at construction.
class Deadline {
  public:
    explicit Deadline(Budget budget)
        : budget_(budget), start_(std::chrono::steady_clock::now()) {}

    bool expired() const noexcept {
        if (budget_.is_infinite()) {
            return false;
        }
        std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start_;
        return elapsed.count() >= budget_.ms();
    }

  private:
    Budget budget_;
    std::chrono::steady_clock::time_point start_;
};

inline constexpr std::uint32_t kDefaultRerankPool = 5000;

struct QueryParams {
    std::uint32_t k = 10;
    std::uint32_t k_prime = kDefaultRerankPool;
    Budget budget;
    std::uint32_t threads = 1;

    void validate() const {
        if (k < 1) {
            throw InvalidArgument("k must be >= 1");
        }
        if (k_prime < k) {
            throw InvalidArgument("k' must be >= k");
        }
        if (threads < 1) {
            throw InvalidArgument("threads must be >= 1");
        }
    }
};

struct Hit {
    ExternalId id = 0;
    double score = 0.0;

    friend bool operator==(const Hit&, const Hit&) = default;
};

/// Ranked hits, descending by score; equal scores in ascending id order.
struct TopKResult {
    std::vector<Hit> hits;

    std::vector<ExternalId> ids() const {
        std::vector<ExternalId> out;
        out.reserve(hits.size());
        for (const auto& h : hits) {
            out.push_back(h.id);
        }
        return out;
    }

    std::vector<ExternalId> sorted_ids() const {
        auto out = ids();
        std::sort(out.begin(), out.end());
        return out;
    }
};

}  // namespace sinnamon
