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
#include <bit>
#include <cstdint>
#include <iterator>
#include <vector>

namespace sinnamon {

/// Dynamic compressed set of 32-bit ids.
///
/// Ids are partitioned by their high 16 bits into chunks. A chunk holds its
/// low 16 bits either as a sorted array (up to kArrayMax entries) or as a
/// 65536-bit bitmap, converting between the two as its cardinality crosses
/// kArrayMax. Chunks are kept sorted by key, so iteration is ascending.
class CompressedIdSet {
  public:
    static constexpr std::uint32_t kArrayMax = 4096;
    static constexpr std::size_t kBitmapWords = 1024;

  private:
    struct Chunk {
        std::uint16_t key = 0;
        std::uint32_t card = 0;
        std::vector<std::uint16_t> array;  // used while !is_bitmap
        std::vector<std::uint64_t> bitmap;  // kBitmapWords words while is_bitmap
        bool is_bitmap = false;

        bool contains(std::uint16_t low) const {
            if (is_bitmap) {
                return ((bitmap[low >> 6] >> (low & 63U)) & 1U) != 0;
            }
            return std::binary_search(array.begin(), array.end(), low);
        }

        bool insert(std::uint16_t low) {
            if (is_bitmap) {
                std::uint64_t mask = std::uint64_t{1} << (low & 63U);
                std::uint64_t& word = bitmap[low >> 6];
                if ((word & mask) != 0) {
                    return false;
                }
                word |= mask;
                ++card;
                return true;
            }
            auto it = std::lower_bound(array.begin(), array.end(), low);
            if (it != array.end() && *it == low) {
                return false;
            }
            array.insert(it, low);
            ++card;
            if (card > kArrayMax) {
                to_bitmap();
            }
            return true;
        }

        bool remove(std::uint16_t low) {
            if (is_bitmap) {
                std::uint64_t mask = std::uint64_t{1} << (low & 63U);
                std::uint64_t& word = bitmap[low >> 6];
                if ((word & mask) == 0) {
                    return false;
                }
                word &= ~mask;
                --card;
                if (card <= kArrayMax) {
                    to_array();
                }
                return true;
            }
            auto it = std::lower_bound(array.begin(), array.end(), low);
            if (it == array.end() || *it != low) {
                return false;
            }
            array.erase(it);
            --card;
            return true;
        }

        /// Number of stored lows strictly below `low`.
        std::uint32_t rank(std::uint16_t low) const {
            if (is_bitmap) {
                std::uint32_t r = 0;
                std::size_t word = low >> 6;
                for (std::size_t w = 0; w < word; ++w) {
                    r += static_cast<std::uint32_t>(std::popcount(bitmap[w]));
                }
                std::uint64_t below = (std::uint64_t{1} << (low & 63U)) - 1;
                return r + static_cast<std::uint32_t>(std::popcount(bitmap[word] & below));
            }
            return static_cast<std::uint32_t>(std::lower_bound(array.begin(), array.end(), low) -
                                              array.begin());
        }

        /// Calls fn(low) for stored lows in [lo, hi), hi up to 65536.
        template <typename Fn>
        void for_each(std::uint32_t lo, std::uint32_t hi, Fn&& fn) const {
            if (lo >= hi) {
                return;
            }
            if (!is_bitmap) {
                auto it = std::lower_bound(array.begin(), array.end(), static_cast<std::uint16_t>(lo));
                for (; it != array.end() && *it < hi; ++it) {
                    fn(*it);
                }
                return;
            }
            std::size_t first = lo >> 6;
            std::size_t last = (hi - 1) >> 6;
            for (std::size_t w = first; w <= last; ++w) {
                std::uint64_t word = bitmap[w];
                if (w == first) {
                    word &= ~std::uint64_t{0} << (lo & 63U);
                }
                if (w == last && (hi & 63U) != 0) {
                    word &= (std::uint64_t{1} << (hi & 63U)) - 1;
                }
                while (word != 0) {
                    auto bit = static_cast<std::uint32_t>(std::countr_zero(word));
                    fn(static_cast<std::uint16_t>((w << 6) + bit));
                    word &= word - 1;
                }
            }
        }

        void to_bitmap() {
            bitmap.assign(kBitmapWords, 0);
            for (std::uint16_t low : array) {
                bitmap[low >> 6] |= std::uint64_t{1} << (low & 63U);
            }
            array.clear();
            array.shrink_to_fit();
            is_bitmap = true;
        }

        void to_array() {
            array.clear();
            array.reserve(card);
            for_each(0, 65536, [&](std::uint16_t low) { array.push_back(low); });
            bitmap.clear();
            bitmap.shrink_to_fit();
            is_bitmap = false;
        }

        std::size_t memory_bytes() const {
            return sizeof(Chunk) + array.capacity() * sizeof(std::uint16_t) +
                   bitmap.capacity() * sizeof(std::uint64_t);
        }
    };

  public:
    bool insert(std::uint32_t id) {
        auto key = static_cast<std::uint16_t>(id >> 16);
        auto it = find_chunk(key);
        if (it == chunks_.end() || it->key != key) {
            it = chunks_.insert(it, Chunk{});
            it->key = key;
        }
        bool added = it->insert(static_cast<std::uint16_t>(id & 0xFFFFU));
        size_ += added ? 1 : 0;
        return added;
    }

    /// Removes `id`; returns false (and does nothing) when absent.
    bool remove(std::uint32_t id) {
        auto key = static_cast<std::uint16_t>(id >> 16);
        auto it = find_chunk(key);
        if (it == chunks_.end() || it->key != key) {
            return false;
        }
        bool removed = it->remove(static_cast<std::uint16_t>(id & 0xFFFFU));
        if (removed) {
            --size_;
            if (it->card == 0) {
                chunks_.erase(it);
            }
        }
        return removed;
    }

    bool contains(std::uint32_t id) const {
        auto key = static_cast<std::uint16_t>(id >> 16);
        auto it = find_chunk(key);
        return it != chunks_.end() && it->key == key && it->contains(static_cast<std::uint16_t>(id & 0xFFFFU));
    }

    /// Number of stored ids strictly below `id`.
    std::size_t rank(std::uint32_t id) const {
        auto key = static_cast<std::uint16_t>(id >> 16);
        std::size_t r = 0;
        for (const auto& c : chunks_) {
            if (c.key < key) {
                r += c.card;
            } else {
                if (c.key == key) {
                    r += c.rank(static_cast<std::uint16_t>(id & 0xFFFFU));
                }
                break;
            }
        }
        return r;
    }

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    void clear() noexcept {
        chunks_.clear();
        size_ = 0;
    }

    /// Calls fn(id) for every stored id in [lo, hi), ascending.
    template <typename Fn>
    void for_each_in_range(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        if (lo >= hi) {
            return;
        }
        auto it = find_chunk(static_cast<std::uint16_t>(lo >> 16));
        for (; it != chunks_.end(); ++it) {
            std::uint64_t base = std::uint64_t{it->key} << 16;
            if (base >= hi) {
                break;
            }
            auto clo = static_cast<std::uint32_t>(lo > base ? lo - base : 0);
            auto chi = static_cast<std::uint32_t>(std::min<std::uint64_t>(hi - base, 65536));
            auto high = static_cast<std::uint32_t>(base);
            it->for_each(clo, chi, [&](std::uint16_t low) { fn(high | low); });
        }
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for_each_in_range(0, std::uint64_t{1} << 32, std::forward<Fn>(fn));
    }

    std::vector<std::uint32_t> to_vector() const {
        std::vector<std::uint32_t> out;
        out.reserve(size_);
        for_each([&](std::uint32_t id) { out.push_back(id); });
        return out;
    }

    std::size_t memory_bytes() const {
        std::size_t bytes = sizeof(*this);
        for (const auto& c : chunks_) {
            bytes += c.memory_bytes();
        }
        return bytes;
    }

    std::size_t bitmap_chunks() const {
        return static_cast<std::size_t>(
            std::count_if(chunks_.begin(), chunks_.end(), [](const Chunk& c) { return c.is_bitmap; }));
    }

    class const_iterator {
      public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = std::uint32_t;
        using difference_type = std::ptrdiff_t;
        using pointer = const std::uint32_t*;
        using reference = std::uint32_t;

        const_iterator() = default;

        std::uint32_t operator*() const {
            const Chunk& c = (*chunks_)[chunk_];
            return (std::uint32_t{c.key} << 16) | pos_low();
        }

        const_iterator& operator++() {
            advance();
            return *this;
        }
        const_iterator operator++(int) {
            auto copy = *this;
            advance();
            return copy;
        }
        friend bool operator==(const const_iterator& a, const const_iterator& b) {
            return a.chunk_ == b.chunk_ && a.pos_ == b.pos_;
        }

      private:
        friend class CompressedIdSet;
        const_iterator(const std::vector<Chunk>* chunks, std::size_t chunk)
            : chunks_(chunks), chunk_(chunk) {
            settle(0);
        }

        std::uint16_t pos_low() const {
            const Chunk& c = (*chunks_)[chunk_];
            return c.is_bitmap ? static_cast<std::uint16_t>(pos_) : c.array[pos_];
        }

        // Positions the iterator on the first element at or after `pos` in the
        // current chunk, moving to later chunks as needed.
        void settle(std::uint32_t pos) {
            while (chunk_ < chunks_->size()) {
                const Chunk& c = (*chunks_)[chunk_];
                if (!c.is_bitmap) {
                    if (pos < c.array.size()) {
                        pos_ = pos;
                        return;
                    }
                } else {
                    for (std::size_t w = pos >> 6; w < kBitmapWords && pos < 65536; ++w) {
                        std::uint64_t word = c.bitmap[w];
                        if (w == (pos >> 6)) {
                            word &= ~std::uint64_t{0} << (pos & 63U);
                        }
                        if (word != 0) {
                            pos_ = static_cast<std::uint32_t>((w << 6) + std::countr_zero(word));
                            return;
                        }
                    }
                }
                ++chunk_;
                pos = 0;
            }
            pos_ = 0;
        }

        void advance() { settle(pos_ + 1); }

        const std::vector<Chunk>* chunks_ = nullptr;
        std::size_t chunk_ = 0;
        std::uint32_t pos_ = 0;
    };

    const_iterator begin() const { return const_iterator(&chunks_, 0); }
    const_iterator end() const { return const_iterator(&chunks_, chunks_.size()); }

    friend bool operator==(const CompressedIdSet& a, const CompressedIdSet& b) {
        return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin(), b.end());
    }

  private:
    std::vector<Chunk>::iterator find_chunk(std::uint16_t key) {
        return std::lower_bound(chunks_.begin(), chunks_.end(), key,
                                [](const Chunk& c, std::uint16_t k) { return c.key < k; });
    }
    std::vector<Chunk>::const_iterator find_chunk(std::uint16_t key) const {
        return std::lower_bound(chunks_.begin(), chunks_.end(), key,
                                [](const Chunk& c, std::uint16_t k) { return c.key < k; });
    }

    std::vector<Chunk> chunks_;
    std::size_t size_ = 0;
};

}  // namespace sinnamon
