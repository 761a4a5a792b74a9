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

#include <bit>
#include <cstdint>

namespace sinnamon {

/// bfloat16 is the upper half of an IEEE-754 binary32 pattern. Values are
/// stored with round-to-nearest-even; sketch bounds use directed rounding.
/// Inputs are assumed finite; overflow saturates to infinity.

inline float bf16_to_float(std::uint16_t bits) noexcept {
    return std::bit_cast<float>(static_cast<std::uint32_t>(bits) << 16);
}

inline std::uint16_t bf16_nearest_even(float value) noexcept {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
    std::uint32_t lsb = (bits >> 16) & 1U;
    bits += 0x7FFFU + lsb;
    return static_cast<std::uint16_t>(bits >> 16);
}

/// Smallest bfloat16 that is >= value.
inline std::uint16_t bf16_round_up(float value) noexcept {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
    auto truncated = static_cast<std::uint16_t>(bits >> 16);
    if ((bits & 0xFFFFU) == 0) {
        return truncated;
    }
    // Truncation moves toward zero: already upward for negatives.
    return (bits >> 31) != 0 ? truncated : static_cast<std::uint16_t>(truncated + 1);
}

/// Largest bfloat16 that is <= value.
inline std::uint16_t bf16_round_down(float value) noexcept {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
    auto truncated = static_cast<std::uint16_t>(bits >> 16);
    if ((bits & 0xFFFFU) == 0) {
        return truncated;
    }
    return (bits >> 31) != 0 ? static_cast<std::uint16_t>(truncated + 1) : truncated;
}

}  // namespace sinnamon
