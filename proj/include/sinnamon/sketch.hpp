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

#include <cstdint>
#include <limits>
#include <vector>

#include "sinnamon/bfloat16.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// `count` independent random maps from coordinates to [0, rows), each a pure
/// function of (seed, mapping index, coordinate).
class HashMappings {
  public:
    HashMappings(std::uint32_t rows, std::uint32_t count, std::uint64_t seed)
        : rows_(rows), count_(count), seed_(seed) {
        if (rows < 1 || count < 1) {
            throw InvalidArgument("hash mappings need rows >= 1 and count >= 1");
        }
    }

    std::uint32_t row(std::uint32_t mapping, Coord coord) const noexcept {
        std::uint64_t x = splitmix64(seed_ ^ splitmix64(mapping));
        x = splitmix64(x ^ coord);
        return static_cast<std::uint32_t>(x % rows_);
    }

    /// Rows of all mappings for `coord`, in mapping order.
    void rows_of(Coord coord, std::vector<std::uint32_t>& out) const {
        out.resize(count_);
        for (std::uint32_t o = 0; o < count_; ++o) {
            out[o] = row(o, coord);
        }
    }

    std::uint32_t rows() const noexcept { return rows_; }
    std::uint32_t count() const noexcept { return count_; }
    std::uint64_t seed() const noexcept { return seed_; }

  private:
    std::uint32_t rows_;
    std::uint32_t count_;
    std::uint64_t seed_;
};

/// Column-per-slot sketch storage: `rows` upper-bound rows and, unless
/// `nonneg`, `rows` lower-bound rows, each a contiguous growable array of
/// bfloat16 cells. Upper cells are rounded toward +inf and lower cells
/// toward -inf so decoded values remain bounds.
class SketchMatrix {
  public:
    SketchMatrix(std::uint32_t rows, bool nonneg)
        : rows_(rows), nonneg_(nonneg), upper_(rows), lower_(nonneg ? 0 : rows) {}

    void ensure_columns(std::size_t columns) {
        if (columns <= columns_) {
            return;
        }
        for (auto& r : upper_) {
            r.resize(columns, 0);
        }
        for (auto& r : lower_) {
            r.resize(columns, 0);
        }
        columns_ = columns;
    }

    /// Resets every cell of `slot` to bfloat16 zero.
    void clear_column(Slot slot) {
        for (auto& r : upper_) {
            r[slot] = 0;
        }
        for (auto& r : lower_) {
            r[slot] = 0;
        }
    }

    void set_upper(std::uint32_t row, Slot slot, float value) { upper_[row][slot] = bf16_round_up(value); }
    void set_lower(std::uint32_t row, Slot slot, float value) { lower_[row][slot] = bf16_round_down(value); }

    float upper(std::uint32_t row, Slot slot) const { return bf16_to_float(upper_[row][slot]); }
    float lower(std::uint32_t row, Slot slot) const { return bf16_to_float(lower_[row][slot]); }

    const std::uint16_t* upper_row(std::uint32_t row) const noexcept { return upper_[row].data(); }
    const std::uint16_t* lower_row(std::uint32_t row) const noexcept { return lower_[row].data(); }

    std::uint32_t rows() const noexcept { return rows_; }
    bool nonneg() const noexcept { return nonneg_; }
    std::size_t columns() const noexcept { return columns_; }
    std::size_t row_count() const noexcept { return upper_.size() + lower_.size(); }
    std::size_t memory_bytes() const noexcept { return row_count() * columns_ * sizeof(std::uint16_t); }

    const std::vector<std::vector<std::uint16_t>>& upper_rows() const noexcept { return upper_; }
    const std::vector<std::vector<std::uint16_t>>& lower_rows() const noexcept { return lower_; }

    static SketchMatrix restore(std::uint32_t rows, bool nonneg, std::size_t columns,
                                std::vector<std::vector<std::uint16_t>> upper,
                                std::vector<std::vector<std::uint16_t>> lower) {
        SketchMatrix s(rows, nonneg);
        if (upper.size() != rows || lower.size() != (nonneg ? 0 : rows)) {
            throw IndexFormatError("sketch: row count mismatch");
        }
        for (const auto* half : {&upper, &lower}) {
            for (const auto& r : *half) {
                if (r.size() != columns) {
                    throw IndexFormatError("sketch: column count mismatch");
                }
            }
        }
        s.upper_ = std::move(upper);
        s.lower_ = std::move(lower);
        s.columns_ = columns;
        return s;
    }

  private:
    std::uint32_t rows_;
    bool nonneg_;
    std::size_t columns_ = 0;
    std::vector<std::vector<std::uint16_t>> upper_;
    std::vector<std::vector<std::uint16_t>> lower_;
};

}  // namespace sinnamon
