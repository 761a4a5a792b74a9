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

#include "sinnamon/bfloat16.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/id_set.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

/// Uncompressed inverted list: two parallel arrays of 32-bit slots and
/// 32-bit values in insertion order. Removal swaps the last posting into the
/// vacated position.
class RawPostingList {
  public:
    static constexpr bool kSortedBySlot = false;

    /// Appends a posting. Throws DuplicateId when `slot` is already present
    /// (a linear scan); engines that guarantee fresh slots use `append`.
    void insert(Slot slot, float value) {
        if (std::find(ids_.begin(), ids_.end(), slot) != ids_.end()) {
            throw DuplicateId(slot);
        }
        append(slot, value);
    }

    void append(Slot slot, float value) {
        ids_.push_back(slot);
        vals_.push_back(value);
    }

    bool remove(Slot slot) {
        auto it = std::find(ids_.begin(), ids_.end(), slot);
        if (it == ids_.end()) {
            return false;
        }
        auto pos = static_cast<std::size_t>(it - ids_.begin());
        ids_[pos] = ids_.back();
        vals_[pos] = vals_.back();
        ids_.pop_back();
        vals_.pop_back();
        return true;
    }

    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    const std::vector<Slot>& ids() const noexcept { return ids_; }
    const std::vector<float>& values() const noexcept { return vals_; }

    /// Calls fn(slot, value) for postings at positions [begin, end).
    template <typename Fn>
    void for_each_position(std::size_t begin, std::size_t end, Fn&& fn) const {
        const Slot* ids = ids_.data();
        const float* vals = vals_.data();
        for (std::size_t p = begin; p < end; ++p) {
            fn(ids[p], vals[p]);
        }
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for_each_position(0, ids_.size(), std::forward<Fn>(fn));
    }

    std::size_t memory_bytes() const {
        return ids_.capacity() * sizeof(Slot) + vals_.capacity() * sizeof(float);
    }

    static RawPostingList restore(std::vector<Slot> ids, std::vector<float> vals) {
        if (ids.size() != vals.size()) {
            throw IndexFormatError("posting list: length mismatch");
        }
        RawPostingList l;
        l.ids_ = std::move(ids);
        l.vals_ = std::move(vals);
        return l;
    }

  private:
    std::vector<Slot> ids_;
    std::vector<float> vals_;
};

/// Compressed inverted list: slots in a CompressedIdSet and values as
/// round-to-nearest-even bfloat16 in an array aligned with slot rank.
class CompressedPostingList {
  public:
    static constexpr bool kSortedBySlot = true;

    void insert(Slot slot, float value) {
        std::size_t r = ids_.rank(slot);
        if (!ids_.insert(slot)) {
            throw DuplicateId(slot);
        }
        vals_.insert(vals_.begin() + static_cast<std::ptrdiff_t>(r), bf16_nearest_even(value));
    }

    void append(Slot slot, float value) { insert(slot, value); }

    bool remove(Slot slot) {
        if (!ids_.contains(slot)) {
            return false;
        }
        std::size_t r = ids_.rank(slot);
        ids_.remove(slot);
        vals_.erase(vals_.begin() + static_cast<std::ptrdiff_t>(r));
        return true;
    }

    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    const CompressedIdSet& ids() const noexcept { return ids_; }
    const std::vector<std::uint16_t>& encoded_values() const noexcept { return vals_; }

    /// Calls fn(slot, value) for postings with slot in [lo, hi).
    template <typename Fn>
    void for_each_in_slot_range(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        std::size_t r = lo == 0 ? 0 : ids_.rank(static_cast<std::uint32_t>(lo));
        const std::uint16_t* vals = vals_.data();
        ids_.for_each_in_range(lo, hi, [&](std::uint32_t slot) { fn(slot, bf16_to_float(vals[r++])); });
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for_each_in_slot_range(0, std::uint64_t{1} << 32, std::forward<Fn>(fn));
    }

    std::size_t memory_bytes() const {
        return ids_.memory_bytes() + vals_.capacity() * sizeof(std::uint16_t);
    }

    static CompressedPostingList restore(const std::vector<Slot>& ids, std::vector<std::uint16_t> vals) {
        if (ids.size() != vals.size() || !std::is_sorted(ids.begin(), ids.end())) {
            throw IndexFormatError("compressed posting list: malformed");
        }
        CompressedPostingList l;
        for (Slot s : ids) {
            if (!l.ids_.insert(s)) {
                throw IndexFormatError("compressed posting list: duplicate slot");
            }
        }
        l.vals_ = std::move(vals);
        return l;
    }

  private:
    CompressedIdSet ids_;
    std::vector<std::uint16_t> vals_;
};

}  // namespace sinnamon
