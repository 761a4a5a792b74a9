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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sinnamon/error.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

/// On-disk vector formats.
///
/// text:   one record per line, `<ext_id> <coord>:<value> ...`, single spaces,
///         values in the shortest decimal form that round-trips binary32.
/// binary: magic "SPVEC1\0\0", u64 record count, then per record u64 ext_id,
///         u32 nnz, nnz x (u32 coord, f32 value); all little-endian.
enum class VectorFormat { Text, Binary };

inline VectorFormat parse_vector_format(std::string_view name) {
    if (name == "text") {
        return VectorFormat::Text;
    }
    if (name == "binary") {
        return VectorFormat::Binary;
    }
    throw InvalidArgument("unknown vector format '" + std::string(name) + "'");
}

/// A malformed vector file. `position` is the 1-based line (text) or record
/// (binary) number where the problem was found.
class FormatError : public Error {
  public:
    enum class Kind {
        Malformed,
        DuplicateCoordinate,
        UnsortedCoordinates,
        NonFiniteValue,
        ZeroValue,
        TruncatedRecord,
        BadMagic,
    };

    FormatError(Kind kind, std::size_t position, const std::string& detail)
        : Error(std::string(kind_name(kind)) + " at " + std::to_string(position) + ": " + detail),
          kind_(kind),
          position_(position) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

    static const char* kind_name(Kind k) noexcept {
        switch (k) {
            case Kind::Malformed: return "malformed record";
            case Kind::DuplicateCoordinate: return "duplicate coordinate";
            case Kind::UnsortedCoordinates: return "unsorted coordinates";
            case Kind::NonFiniteValue: return "non-finite value";
            case Kind::ZeroValue: return "zero value";
            case Kind::TruncatedRecord: return "truncated record";
            case Kind::BadMagic: return "bad magic";
        }
        return "format error";
    }

  private:
    Kind kind_;
    std::size_t position_;
};

namespace detail {

inline constexpr std::array<char, 8> kVectorMagic = {'S', 'P', 'V', 'E', 'C', '1', '\0', '\0'};

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<unsigned char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
bool get_le(std::istream& in, T& value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        return false;
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    std::memcpy(&value, bytes.data(), sizeof(T));
    return true;
}

inline void check_entry(Coord coord, float value, const SparseVector& v, std::size_t pos) {
    if (!v.coords.empty()) {
        if (coord == v.coords.back()) {
            throw FormatError(FormatError::Kind::DuplicateCoordinate, pos,
                              "coordinate " + std::to_string(coord));
        }
        if (coord < v.coords.back()) {
            throw FormatError(FormatError::Kind::UnsortedCoordinates, pos,
                              "coordinate " + std::to_string(coord));
        }
    }
    if (!std::isfinite(value)) {
        throw FormatError(FormatError::Kind::NonFiniteValue, pos, "coordinate " + std::to_string(coord));
    }
    if (value == 0.0F) {
        throw FormatError(FormatError::Kind::ZeroValue, pos, "coordinate " + std::to_string(coord));
    }
}

inline SparseVector parse_text_record(std::string_view line, std::size_t lineno) {
    using Kind = FormatError::Kind;
    SparseVector v;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto [after_id, ec] = std::from_chars(p, end, v.id);
    if (ec != std::errc() || after_id == p) {
        throw FormatError(Kind::Malformed, lineno, "expected external id");
    }
    p = after_id;
    while (p != end) {
        if (*p != ' ' || p + 1 == end) {
            throw FormatError(Kind::Malformed, lineno, "expected single space before entry");
        }
        ++p;
        Coord coord = 0;
        auto [after_coord, ec1] = std::from_chars(p, end, coord);
        if (ec1 != std::errc() || after_coord == end || *after_coord != ':') {
            throw FormatError(Kind::Malformed, lineno, "expected <coord>:<value>");
        }
        p = after_coord + 1;
        float value = 0.0F;
        auto [after_value, ec2] = std::from_chars(p, end, value);
        if (ec2 == std::errc::result_out_of_range) {
            throw FormatError(Kind::NonFiniteValue, lineno, "value out of binary32 range");
        }
        if (ec2 != std::errc() || after_value == p) {
            throw FormatError(Kind::Malformed, lineno, "expected value");
        }
        p = after_value;
        check_entry(coord, value, v, lineno);
        v.coords.push_back(coord);
        v.values.push_back(value);
    }
    return v;
}

}  // namespace detail

/// Formats a float in its shortest round-trip decimal form.
inline std::string format_float(float value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

inline std::string format_double(double value) {
    std::array<char, 40> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

inline void write_text_record(std::ostream& out, const SparseVector& v) {
    out << v.id;
    for (std::size_t i = 0; i < v.coords.size(); ++i) {
        out << ' ' << v.coords[i] << ':' << format_float(v.values[i]);
    }
    out << '\n';
}

/// Streams every record of `in` to fn(SparseVector&&), validating as it goes.
template <typename Fn>
void for_each_vector(std::istream& in, VectorFormat format, Fn&& fn) {
    using Kind = FormatError::Kind;
    if (format == VectorFormat::Text) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                if (in.peek() == std::char_traits<char>::eof()) {
                    break;
                }
                throw FormatError(Kind::Malformed, lineno, "empty line");
            }
            fn(detail::parse_text_record(line, lineno));
        }
        return;
    }
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size())) {
        if (in.gcount() == 0) {
            return;  // empty file
        }
        throw FormatError(Kind::BadMagic, 0, "file shorter than magic");
    }
    if (magic != detail::kVectorMagic) {
        throw FormatError(Kind::BadMagic, 0, "not an SPVEC1 file");
    }
    std::uint64_t count = 0;
    if (!detail::get_le(in, count)) {
        throw FormatError(Kind::TruncatedRecord, 0, "missing record count");
    }
    for (std::uint64_t r = 1; r <= count; ++r) {
        SparseVector v;
        std::uint32_t nnz = 0;
        if (!detail::get_le(in, v.id) || !detail::get_le(in, nnz)) {
            throw FormatError(Kind::TruncatedRecord, r, "record header");
        }
        v.coords.reserve(std::min<std::uint32_t>(nnz, 1U << 16));
        v.values.reserve(std::min<std::uint32_t>(nnz, 1U << 16));
        for (std::uint32_t e = 0; e < nnz; ++e) {
            Coord coord = 0;
            float value = 0.0F;
            if (!detail::get_le(in, coord) || !detail::get_le(in, value)) {
                throw FormatError(Kind::TruncatedRecord, r, "entry " + std::to_string(e));
            }
            detail::check_entry(coord, value, v, r);
            v.coords.push_back(coord);
            v.values.push_back(value);
        }
        fn(std::move(v));
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError(Kind::Malformed, count + 1, "trailing bytes after last record");
    }
}

inline std::vector<SparseVector> read_vectors(std::istream& in, VectorFormat format) {
    std::vector<SparseVector> out;
    for_each_vector(in, format, [&](SparseVector&& v) { out.push_back(std::move(v)); });
    return out;
}

inline std::vector<SparseVector> read_vectors(const std::string& path, VectorFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_vectors(in, format);
}

inline void write_vectors(std::ostream& out, VectorFormat format, std::span<const SparseVector> vectors) {
    if (format == VectorFormat::Text) {
        for (const auto& v : vectors) {
            write_text_record(out, v);
        }
        return;
    }
    out.write(detail::kVectorMagic.data(), detail::kVectorMagic.size());
    detail::put_le<std::uint64_t>(out, vectors.size());
    for (const auto& v : vectors) {
        detail::put_le<std::uint64_t>(out, v.id);
        detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.coords.size()));
        for (std::size_t i = 0; i < v.coords.size(); ++i) {
            detail::put_le<std::uint32_t>(out, v.coords[i]);
            detail::put_le<float>(out, v.values[i]);
        }
    }
}

inline void write_vectors(const std::string& path, VectorFormat format, std::span<const SparseVector> vectors) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_vectors(out, format, vectors);
    if (!out.flush()) {
        throw IoError("write to '" + path + "' failed");
    }
}

/// In-memory raw vector store keyed by external id, with whole-file
/// snapshot persistence in the binary vector format.
class VectorStore {
  public:
    void put(SparseVector v) {
        auto id = v.id;
        if (!vectors_.emplace(id, std::move(v)).second) {
            throw DuplicateId(id);
        }
    }

    const SparseVector& fetch(ExternalId id) const {
        auto it = vectors_.find(id);
        if (it == vectors_.end()) {
            throw MissingVector(id);
        }
        return it->second;
    }

    void remove(ExternalId id) {
        if (vectors_.erase(id) == 0) {
            throw MissingVector(id);
        }
    }

    bool contains(ExternalId id) const { return vectors_.contains(id); }
    std::size_t size() const noexcept { return vectors_.size(); }

    /// All vectors ordered by external id.
    std::vector<SparseVector> snapshot() const {
        std::vector<SparseVector> out;
        out.reserve(vectors_.size());
        for (const auto& [id, v] : vectors_) {
            out.push_back(v);
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        return out;
    }

    void save(const std::string& path) const { write_vectors(path, VectorFormat::Binary, snapshot()); }

    static VectorStore load(const std::string& path) {
        VectorStore store;
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw IoError("cannot open '" + path + "' for reading");
        }
        for_each_vector(in, VectorFormat::Binary, [&](SparseVector&& v) { store.put(std::move(v)); });
        return store;
    }

  private:
    std::unordered_map<ExternalId, SparseVector> vectors_;
};

}  // namespace sinnamon
