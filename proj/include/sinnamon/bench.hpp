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

#include <chrono>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sinnamon/collection.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/linscan_index.hpp"
#include "sinnamon/sinnamon_index.hpp"
#include "sinnamon/storage.hpp"

namespace sinnamon {

using WorkCounts = std::map<std::string, std::uint64_t>;

template <typename PostingList>
WorkCounts work_counts(const LinScanIndex<PostingList>& e) {
    const auto& c = e.counters();
    return {{"postings_inserted", c.postings_inserted},
            {"postings_removed", c.postings_removed},
            {"postings_scanned", c.postings_scanned}};
}

inline WorkCounts work_counts(const SinnamonIndex& e) {
    const auto& c = e.counters();
    return {{"idset_inserts", c.idset_inserts},
            {"idset_removals", c.idset_removals},
            {"sketch_cells_written", c.sketch_cells_written},
            {"sketch_cells_read", c.sketch_cells_read},
            {"postings_scanned", c.postings_scanned}};
}

struct InsertSample {
    std::size_t index_size = 0;
    double vectors_per_sec = 0.0;
};

struct InsertReport {
    std::vector<InsertSample> samples;
    /// Engine work counters after the last trial.
    WorkCounts work;
};

/// Inserts `vectors` into a fresh collection from `make` in buckets of
/// `bucket`, recording throughput per bucket against the index size at the
/// end of the bucket; throughput is averaged over `trials` runs.
template <typename Make>
InsertReport bench_insert(Make&& make, std::span<const SparseVector> vectors, std::size_t bucket,
                          std::size_t trials = 1) {
    if (bucket < 1 || trials < 1) {
        throw InvalidArgument("bucket and trials must be >= 1");
    }
    using clock = std::chrono::steady_clock;
    InsertReport report;
    std::size_t buckets = (vectors.size() + bucket - 1) / bucket;
    report.samples.resize(buckets);
    for (std::size_t t = 0; t < trials; ++t) {
        auto col = make();
        for (std::size_t b = 0; b < buckets; ++b) {
            std::size_t begin = b * bucket;
            std::size_t end = std::min(vectors.size(), begin + bucket);
            auto start = clock::now();
            for (std::size_t i = begin; i < end; ++i) {
                col.insert(vectors[i]);
            }
            std::chrono::duration<double> secs = clock::now() - start;
            double rate = static_cast<double>(end - begin) / std::max(secs.count(), 1e-9);
            report.samples[b].index_size = col.size();
            report.samples[b].vectors_per_sec += rate / static_cast<double>(trials);
        }
        if (t + 1 == trials) {
            report.work = work_counts(col.engine());
        }
    }
    return report;
}

struct DeleteSample {
    std::size_t deleted_count = 0;
    double ms = 0.0;
};

struct DeleteReport {
    std::vector<DeleteSample> samples;
    WorkCounts work;
};

/// Deletes `ids` one at a time, timing each deletion.
template <typename Engine>
DeleteReport bench_delete(Collection<Engine>& col, std::span<const ExternalId> ids) {
    using clock = std::chrono::steady_clock;
    DeleteReport report;
    report.samples.reserve(ids.size());
    auto before = work_counts(col.engine());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto start = clock::now();
        col.erase(ids[i]);
        std::chrono::duration<double, std::milli> ms = clock::now() - start;
        report.samples.push_back({i + 1, ms.count()});
    }
    for (const auto& [name, value] : work_counts(col.engine())) {
        report.work[name] = value - before[name];
    }
    return report;
}

inline void write_insert_tsv(std::ostream& out, const InsertReport& r) {
    for (const auto& s : r.samples) {
        out << s.index_size << '\t' << format_double(s.vectors_per_sec) << '\n';
    }
}

inline void write_delete_tsv(std::ostream& out, const DeleteReport& r) {
    for (const auto& s : r.samples) {
        out << s.deleted_count << '\t' << format_double(s.ms) << '\n';
    }
}

}  // namespace sinnamon
