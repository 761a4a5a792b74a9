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
#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sinnamon/collection.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/linscan_index.hpp"
#include "sinnamon/sinnamon_index.hpp"
#include "sinnamon/storage.hpp"

namespace sinnamon {

enum class EngineKind : std::uint32_t {
    LinScan = 0,
    LinScanCompressed = 1,
    Sinnamon = 2,
    SinnamonPlus = 3,
};

inline std::string_view engine_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::LinScan: return "linscan";
        case EngineKind::LinScanCompressed: return "linscan-compressed";
        case EngineKind::Sinnamon: return "sinnamon";
        case EngineKind::SinnamonPlus: return "sinnamon-plus";
    }
    return "unknown";
}

inline EngineKind parse_engine_kind(std::string_view name) {
    for (auto k : {EngineKind::LinScan, EngineKind::LinScanCompressed, EngineKind::Sinnamon,
                   EngineKind::SinnamonPlus}) {
        if (engine_name(k) == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown engine '" + std::string(name) + "'");
}

inline bool is_sketch_engine(EngineKind kind) {
    return kind == EngineKind::Sinnamon || kind == EngineKind::SinnamonPlus;
}

using AnyCollection =
    std::variant<Collection<RawLinScan>, Collection<CompressedLinScan>, Collection<SinnamonIndex>>;

inline AnyCollection make_collection(EngineKind kind, const EngineConfig& config) {
    switch (kind) {
        case EngineKind::LinScan: return Collection<RawLinScan>(RawLinScan(config.dims));
        case EngineKind::LinScanCompressed: return Collection<CompressedLinScan>(CompressedLinScan(config.dims));
        case EngineKind::Sinnamon:
        case EngineKind::SinnamonPlus: {
            EngineConfig c = config;
            c.nonneg = kind == EngineKind::SinnamonPlus;
            return Collection<SinnamonIndex>(SinnamonIndex(c));
        }
    }
    throw InvalidArgument("unknown engine kind");
}

namespace detail {

inline constexpr std::array<char, 8> kIndexMagic = {'S', 'N', 'M', 'N', 'I', 'D', 'X', '\0'};
inline constexpr std::uint32_t kIndexVersion = 1;

template <typename T>
void put_array(std::ostream& out, const std::vector<T>& values) {
    put_le<std::uint64_t>(out, values.size());
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * sizeof(T)));
    } else {
        for (const T& v : values) {
            put_le<T>(out, v);
        }
    }
}

inline constexpr std::uint32_t kReserveCap = 1U << 16;

template <typename T>
T read_le(std::istream& in) {
    T value{};
    if (!get_le(in, value)) {
        throw IndexFormatError("index file truncated");
    }
    return value;
}

template <typename T>
std::vector<T> get_array(std::istream& in, std::uint64_t limit) {
    auto n = read_le<std::uint64_t>(in);
    if (n > limit) {
        throw IndexFormatError("index file: array length out of range");
    }
    // Read in bounded chunks.
    constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;
    std::vector<T> values;
    while (values.size() < n) {
        std::size_t begin = values.size();
        std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, n - begin));
        values.resize(begin + take);
        if constexpr (std::endian::native == std::endian::little) {
            if (!in.read(reinterpret_cast<char*>(values.data() + begin),
                         static_cast<std::streamsize>(take * sizeof(T)))) {
                throw IndexFormatError("index file truncated");
            }
        } else {
            for (std::size_t i = begin; i < values.size(); ++i) {
                values[i] = read_le<T>(in);
            }
        }
    }
    return values;
}

inline constexpr std::uint64_t kMaxArray = std::uint64_t{1} << 40;

inline void put_id_map(std::ostream& out, const IdMap& ids) {
    put_array(out, ids.slot_ids());
    put_array(out, ids.live_flags());
    put_array(out, ids.free_list());
}

inline IdMap get_id_map(std::istream& in) {
    auto ext = get_array<ExternalId>(in, kMaxArray);
    auto live = get_array<std::uint8_t>(in, kMaxArray);
    auto free_list = get_array<Slot>(in, kMaxArray);
    return IdMap::restore(std::move(ext), std::move(live), std::move(free_list));
}

inline void put_engine(std::ostream& out, const RawLinScan& e) {
    put_le<std::uint32_t>(out, e.dims());
    put_id_map(out, e.id_map());
    for (const auto& l : e.lists()) {
        put_array(out, l.ids());
        put_array(out, l.values());
    }
}

inline void put_engine(std::ostream& out, const CompressedLinScan& e) {
    put_le<std::uint32_t>(out, e.dims());
    put_id_map(out, e.id_map());
    for (const auto& l : e.lists()) {
        put_array(out, l.ids().to_vector());
        put_array(out, l.encoded_values());
    }
}

inline void put_engine(std::ostream& out, const SinnamonIndex& e) {
    const auto& c = e.config();
    put_le<std::uint32_t>(out, c.dims);
    put_le<std::uint32_t>(out, c.rows);
    put_le<std::uint32_t>(out, c.mappings);
    put_le<std::uint64_t>(out, c.seed);
    put_id_map(out, e.id_map());
    for (const auto& s : e.inverted()) {
        put_array(out, s.to_vector());
    }
    put_le<std::uint64_t>(out, e.sketch().columns());
    for (const auto& r : e.sketch().upper_rows()) {
        put_array(out, r);
    }
    for (const auto& r : e.sketch().lower_rows()) {
        put_array(out, r);
    }
}

template <typename Engine>
Engine get_linscan(std::istream& in) {
    auto dims = read_le<std::uint32_t>(in);
    if (dims < 1) {
        throw IndexFormatError("index file: dims must be >= 1");
    }
    IdMap ids = get_id_map(in);
    std::vector<typename Engine::list_type> lists;
    lists.reserve(std::min<std::uint32_t>(dims, kReserveCap));
    for (std::uint32_t c = 0; c < dims; ++c) {
        auto slots = get_array<Slot>(in, kMaxArray);
        for (Slot s : slots) {
            if (!ids.is_live(s)) {
                throw IndexFormatError("index file: posting names a dead slot");
            }
        }
        if constexpr (std::is_same_v<Engine, RawLinScan>) {
            lists.push_back(RawPostingList::restore(std::move(slots), get_array<float>(in, kMaxArray)));
        } else {
            lists.push_back(CompressedPostingList::restore(slots, get_array<std::uint16_t>(in, kMaxArray)));
        }
    }
    return Engine::restore(dims, std::move(ids), std::move(lists));
}

inline SinnamonIndex get_sinnamon(std::istream& in, bool nonneg) {
    EngineConfig c;
    c.dims = read_le<std::uint32_t>(in);
    c.rows = read_le<std::uint32_t>(in);
    c.mappings = read_le<std::uint32_t>(in);
    c.seed = read_le<std::uint64_t>(in);
    c.nonneg = nonneg;
    try {
        c.validate_for_sketch();
    } catch (const InvalidArgument& e) {
        throw IndexFormatError(std::string("index file: ") + e.what());
    }
    IdMap ids = get_id_map(in);
    std::vector<CompressedIdSet> inv;
    inv.reserve(std::min<std::uint32_t>(c.dims, kReserveCap));
    for (std::uint32_t j = 0; j < c.dims; ++j) {
        inv.emplace_back();
        for (Slot s : get_array<Slot>(in, kMaxArray)) {
            if (!ids.is_live(s) || !inv.back().insert(s)) {
                throw IndexFormatError("index file: bad id set entry");
            }
        }
    }
    auto columns = read_le<std::uint64_t>(in);
    std::vector<std::vector<std::uint16_t>> upper;
    std::vector<std::vector<std::uint16_t>> lower;
    for (std::uint32_t r = 0; r < c.rows; ++r) {
        upper.push_back(get_array<std::uint16_t>(in, kMaxArray));
    }
    for (std::uint32_t r = 0; r < (nonneg ? 0 : c.rows); ++r) {
        lower.push_back(get_array<std::uint16_t>(in, kMaxArray));
    }
    auto sketch = SketchMatrix::restore(c.rows, nonneg, columns, std::move(upper), std::move(lower));
    return SinnamonIndex::restore(c, std::move(ids), std::move(inv), std::move(sketch));
}

}  // namespace detail

inline EngineKind kind_of(const AnyCollection& c) {
    return std::visit(
        [](const auto& col) -> EngineKind {
            using E = std::decay_t<decltype(col.engine())>;
            if constexpr (std::is_same_v<E, RawLinScan>) {
                return EngineKind::LinScan;
            } else if constexpr (std::is_same_v<E, CompressedLinScan>) {
                return EngineKind::LinScanCompressed;
            } else {
                return col.engine().config().nonneg ? EngineKind::SinnamonPlus : EngineKind::Sinnamon;
            }
        },
        c);
}

/// Writes engine and vector store to one file: magic, version, engine kind,
/// engine sections, then the store as an embedded binary vector file.
inline void save_collection(std::ostream& out, const AnyCollection& c) {
    out.write(detail::kIndexMagic.data(), detail::kIndexMagic.size());
    detail::put_le<std::uint32_t>(out, detail::kIndexVersion);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kind_of(c)));
    std::visit(
        [&](const auto& col) {
            detail::put_engine(out, col.engine());
            write_vectors(out, VectorFormat::Binary, col.store().snapshot());
        },
        c);
}

inline void save_collection(const std::string& path, const AnyCollection& c) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    save_collection(out, c);
    if (!out.flush()) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline AnyCollection load_collection(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != detail::kIndexMagic) {
        throw IndexFormatError("not an index file");
    }
    auto version = detail::read_le<std::uint32_t>(in);
    if (version != detail::kIndexVersion) {
        throw IndexFormatError("index version " + std::to_string(version) + " not supported (expected " +
                               std::to_string(detail::kIndexVersion) + ")");
    }
    auto kind = detail::read_le<std::uint32_t>(in);
    auto load_store = [&]() {
        VectorStore store;
        try {
            for_each_vector(in, VectorFormat::Binary, [&](SparseVector&& v) { store.put(std::move(v)); });
        } catch (const FormatError& e) {
            throw IndexFormatError(std::string("index file store: ") + e.what());
        }
        return store;
    };
    auto check_sync = [](const auto& engine, const VectorStore& store) {
        if (engine.size() != store.size()) {
            throw IndexFormatError("index file: store and index disagree");
        }
    };
    switch (static_cast<EngineKind>(kind)) {
        case EngineKind::LinScan: {
            auto e = detail::get_linscan<RawLinScan>(in);
            auto s = load_store();
            check_sync(e, s);
            return Collection<RawLinScan>(std::move(e), std::move(s));
        }
        case EngineKind::LinScanCompressed: {
            auto e = detail::get_linscan<CompressedLinScan>(in);
            auto s = load_store();
            check_sync(e, s);
            return Collection<CompressedLinScan>(std::move(e), std::move(s));
        }
        case EngineKind::Sinnamon:
        case EngineKind::SinnamonPlus: {
            auto e = detail::get_sinnamon(in, static_cast<EngineKind>(kind) == EngineKind::SinnamonPlus);
            auto s = load_store();
            check_sync(e, s);
            return Collection<SinnamonIndex>(std::move(e), std::move(s));
        }
    }
    throw IndexFormatError("unknown engine kind " + std::to_string(kind));
}

inline AnyCollection load_collection(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return load_collection(in);
}

}  // namespace sinnamon
