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
#include <unordered_map>
#include <vector>

#include "sinnamon/types.hpp"

namespace sinnamon {

/// Bidirectional external-id / internal-slot map with a free list of
/// recycled slots. Released slots are reissued last-in first-out before the
/// slot space grows.
class IdMap {
  public:
    Slot assign(ExternalId ext) {
        if (ext_to_int_.contains(ext)) {
            throw DuplicateId(ext);
        }
        Slot slot;
        if (!free_list_.empty()) {
            slot = free_list_.back();
            free_list_.pop_back();
            int_to_ext_[slot] = ext;
            live_[slot] = 1;
        } else {
            if (int_to_ext_.size() >= std::numeric_limits<Slot>::max()) {
                throw InvalidArgument("slot space exhausted");
            }
            slot = static_cast<Slot>(int_to_ext_.size());
            int_to_ext_.push_back(ext);
            live_.push_back(1);
        }
        ext_to_int_.emplace(ext, slot);
        return slot;
    }

    Slot release(ExternalId ext) {
        auto it = ext_to_int_.find(ext);
        if (it == ext_to_int_.end()) {
            throw UnknownId(ext);
        }
        Slot slot = it->second;
        ext_to_int_.erase(it);
        live_[slot] = 0;
        free_list_.push_back(slot);
        return slot;
    }

    bool contains(ExternalId ext) const { return ext_to_int_.contains(ext); }

    Slot slot_of(ExternalId ext) const {
        auto it = ext_to_int_.find(ext);
        if (it == ext_to_int_.end()) {
            throw UnknownId(ext);
        }
        return it->second;
    }

    ExternalId ext_of(Slot slot) const { return int_to_ext_[slot]; }
    bool is_live(Slot slot) const { return slot < live_.size() && live_[slot] != 0; }

    /// Number of slots ever issued; the column count of slot-indexed arrays.
    std::size_t slot_capacity() const noexcept { return int_to_ext_.size(); }
    std::size_t live_count() const noexcept { return ext_to_int_.size(); }
    const std::vector<Slot>& free_list() const noexcept { return free_list_; }

    /// Rebuilds a map from its serialized parts: the slot-indexed external ids,
    /// the liveness flags, and the free list in stack order.
    static IdMap restore(std::vector<ExternalId> int_to_ext, std::vector<std::uint8_t> live,
                         std::vector<Slot> free_list) {
        if (int_to_ext.size() != live.size()) {
            throw IndexFormatError("id map: length mismatch");
        }
        IdMap m;
        m.int_to_ext_ = std::move(int_to_ext);
        m.live_ = std::move(live);
        m.free_list_ = std::move(free_list);
        for (std::size_t s = 0; s < m.int_to_ext_.size(); ++s) {
            if (m.live_[s] != 0 && !m.ext_to_int_.emplace(m.int_to_ext_[s], static_cast<Slot>(s)).second) {
                throw IndexFormatError("id map: duplicate external id");
            }
        }
        for (Slot s : m.free_list_) {
            if (s >= m.live_.size() || m.live_[s] != 0) {
                throw IndexFormatError("id map: free list names a live slot");
            }
        }
        return m;
    }

    const std::vector<ExternalId>& slot_ids() const noexcept { return int_to_ext_; }
    const std::vector<std::uint8_t>& live_flags() const noexcept { return live_; }

  private:
    std::unordered_map<ExternalId, Slot> ext_to_int_;
    std::vector<ExternalId> int_to_ext_;
    std::vector<std::uint8_t> live_;
    std::vector<Slot> free_list_;
};

}  // namespace sinnamon
