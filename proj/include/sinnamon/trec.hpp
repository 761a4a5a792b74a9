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
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sinnamon/error.hpp"
#include "sinnamon/storage.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

struct RunEntry {
    std::string doc;
    std::uint32_t rank = 0;
    double score = 0.0;
};

/// Ranked lists per query id, each ordered by its rank field.
using Run = std::map<std::string, std::vector<RunEntry>>;

/// Graded relevance per query id and document id.
using Qrels = std::map<std::string, std::map<std::string, int>>;

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

template <typename T>
T parse_field(std::string_view s, std::size_t lineno, const char* what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError(FormatError::Kind::Malformed, lineno, std::string("bad ") + what);
    }
    return v;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto fields = split_fields(line);
        if (fields.empty()) {
            continue;
        }
        fn(fields, lineno);
    }
}

}  // namespace detail

/// Reads `qid Q0 doc rank score tag` lines. Duplicate (qid, doc) pairs are
/// rejected.
inline Run read_run(std::istream& in) {
    Run run;
    std::set<std::pair<std::string, std::string>> seen;
    detail::for_each_line(in, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
        if (f.size() != 6) {
            throw FormatError(FormatError::Kind::Malformed, lineno, "run lines need 6 fields");
        }
        RunEntry e{std::string(f[2]), detail::parse_field<std::uint32_t>(f[3], lineno, "rank"),
                   detail::parse_field<double>(f[4], lineno, "score")};
        if (!seen.emplace(std::string(f[0]), e.doc).second) {
            throw FormatError(FormatError::Kind::Malformed, lineno, "document repeated for query");
        }
        run[std::string(f[0])].push_back(std::move(e));
    });
    for (auto& [qid, entries] : run) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    }
    return run;
}

/// Reads `qid 0 doc rel` lines.
inline Qrels read_qrels(std::istream& in) {
    Qrels qrels;
    detail::for_each_line(in, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
        if (f.size() != 4) {
            throw FormatError(FormatError::Kind::Malformed, lineno, "qrels lines need 4 fields");
        }
        int rel = detail::parse_field<int>(f[3], lineno, "relevance");
        if (!qrels[std::string(f[0])].emplace(std::string(f[2]), rel).second) {
            throw FormatError(FormatError::Kind::Malformed, lineno, "document repeated for query");
        }
    });
    return qrels;
}

inline Run read_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_run(in);
}

inline Qrels read_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_qrels(in);
}

/// Writes one query's hits as `qid Q0 ext_id rank score tag`, ranks from 1.
inline void write_run_entries(std::ostream& out, const std::string& qid, const TopKResult& result,
                              const std::string& tag) {
    std::uint32_t rank = 1;
    for (const auto& h : result.hits) {
        out << qid << " Q0 " << h.id << ' ' << rank++ << ' ' << format_double(h.score) << ' ' << tag << '\n';
    }
}

inline Run to_run(const std::vector<std::pair<std::string, TopKResult>>& results) {
    Run run;
    for (const auto& [qid, r] : results) {
        auto& entries = run[qid];
        std::uint32_t rank = 1;
        for (const auto& h : r.hits) {
            entries.push_back({std::to_string(h.id), rank++, h.score});
        }
    }
    return run;
}

}  // namespace sinnamon
