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

#include <map>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "sinnamon/collection.hpp"
#include "sinnamon/linscan_index.hpp"
#include "sinnamon/sinnamon_index.hpp"
#include "test_util.hpp"

namespace sinnamon {
namespace {

using testing::abs_values;
using testing::brute_force_top_k;
using testing::gaussian_set;
using testing::params;

EngineConfig config(std::uint32_t dims, std::uint32_t rows, std::uint32_t h, bool nonneg = false,
                    std::uint64_t seed = 1) {
    return EngineConfig{dims, rows, h, seed, nonneg};
}

/// Coordinates whose h=1 rows are pairwise distinct.
std::vector<Coord> distinct_row_coords(const SinnamonIndex& idx, std::size_t count) {
    std::vector<Coord> out;
    std::set<std::uint32_t> rows;
    for (Coord c = 0; c < idx.dims() && out.size() < count; ++c) {
        if (rows.insert(idx.mappings().row(0, c)).second) {
            out.push_back(c);
        }
    }
    return out;
}

float up(float x) { return bf16_to_float(bf16_round_up(x)); }

TEST(SinnamonInsert, CollisionFreeVectorIsStoredExactly) {
    SinnamonIndex idx(config(1000, 16, 1));
    auto c = distinct_row_coords(idx, 3);
    SparseVector v{12, c, {0.5F, -1.25F, 3.0F}};
    idx.insert(v);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(idx.decode(0, c[i], Sign::Positive), v.values[i]);
        EXPECT_EQ(idx.decode(0, c[i], Sign::Negative), v.values[i]);
    }
}

TEST(SinnamonInsert, CollidingValuesKeepMaxAndMin) {
    SinnamonIndex idx(config(1000, 4, 1));
    Coord a = 0;
    Coord b = 1;
    while (idx.mappings().row(0, b) != idx.mappings().row(0, a)) {
        ++b;
    }
    idx.insert({1, {a, b}, {0.5F, 2.0F}});
    std::uint32_t r = idx.mappings().row(0, a);
    EXPECT_EQ(idx.sketch().upper(r, 0), 2.0F);
    EXPECT_EQ(idx.sketch().lower(r, 0), 0.5F);
    EXPECT_EQ(idx.decode(0, a, Sign::Positive), 2.0F);
    EXPECT_EQ(idx.decode(0, b, Sign::Negative), 0.5F);
}

TEST(SinnamonInsert, LargestValueDecodesExactly) {
    auto docs = gaussian_set(10000, 2000, 40, 2);
    SinnamonIndex idx(config(2000, 20, 1));
    for (const auto& d : docs) {
        idx.insert(d);
    }
    for (const auto& d : docs) {
        if (d.nnz() == 0) {
            continue;
        }
        auto i = static_cast<std::size_t>(std::max_element(d.values.begin(), d.values.end()) - d.values.begin());
        Slot s = idx.id_map().slot_of(d.id);
        ASSERT_EQ(idx.decode(s, d.coords[i], Sign::Positive), up(d.values[i]));
    }
}

TEST(SinnamonInsert, RejectsDuplicatesAndNegativeValuesWhenNonNegative) {
    SinnamonIndex idx(config(10, 4, 1));
    idx.insert({1, {2}, {1.0F}});
    EXPECT_THROW(idx.insert({1, {3}, {1.0F}}), DuplicateId);
    SinnamonIndex plus(config(10, 4, 1, true));
    EXPECT_THROW(plus.insert({2, {3}, {-1.0F}}), InvalidArgument);
    EXPECT_EQ(plus.size(), 0U);
}

TEST(SinnamonInsert, RejectsBadConfig) {
    EXPECT_THROW(SinnamonIndex(config(10, 0, 1)), InvalidArgument);
    EXPECT_THROW(SinnamonIndex(config(10, 4, 0)), InvalidArgument);
}

TEST(SinnamonDecode, LeastUpperBoundOverMappings) {
    SinnamonIndex idx(config(5000, 8, 2, false, 3));
    auto docs = gaussian_set(200, 5000, 30, 4);
    for (const auto& d : docs) {
        idx.insert(d);
    }
    for (const auto& d : docs) {
        Slot s = idx.id_map().slot_of(d.id);
        for (Coord c : d.coords) {
            float a = idx.sketch().upper(idx.mappings().row(0, c), s);
            float b = idx.sketch().upper(idx.mappings().row(1, c), s);
            EXPECT_EQ(idx.decode(s, c, Sign::Positive), std::min(a, b));
            float la = idx.sketch().lower(idx.mappings().row(0, c), s);
            float lb = idx.sketch().lower(idx.mappings().row(1, c), s);
            EXPECT_EQ(idx.decode(s, c, Sign::Negative), std::max(la, lb));
        }
    }
}

TEST(SinnamonDecode, SandwichHoldsForEveryEntry) {
    for (std::uint32_t h : {1U, 2U, 3U}) {
        SinnamonIndex idx(config(3000, 15, h, false, h));
        auto docs = gaussian_set(3000, 3000, 40, 5);
        for (const auto& d : docs) {
            idx.insert(d);
        }
        for (const auto& d : docs) {
            Slot s = idx.id_map().slot_of(d.id);
            for (std::size_t i = 0; i < d.nnz(); ++i) {
                ASSERT_LE(idx.decode(s, d.coords[i], Sign::Negative), d.values[i]);
                ASSERT_GE(idx.decode(s, d.coords[i], Sign::Positive), d.values[i]);
            }
        }
    }
}

TEST(SinnamonDecode, NonNegativeLowerBoundIsZero) {
    SinnamonIndex idx(config(100, 8, 1, true));
    idx.insert({1, {3}, {2.5F}});
    EXPECT_EQ(idx.decode(0, 3, Sign::Negative), 0.0F);
    EXPECT_EQ(idx.decode(0, 3, Sign::Positive), 2.5F);
}

TEST(SinnamonScore, CollisionFreeDocumentScoresExactly) {
    SinnamonIndex idx(config(1000, 64, 1));
    auto c = distinct_row_coords(idx, 4);
    SparseVector d{1, c, {1.0F, -0.5F, 2.0F, 0.25F}};
    idx.insert(d);
    SparseVector q{9, {c[0], c[1], c[3]}, {2.0F, 3.0F, -4.0F}};
    EXPECT_EQ(idx.score(q, {}).scores[0], inner_product(q, d));
}

TEST(SinnamonScore, GapEqualsDecodeErrors) {
    auto docs = gaussian_set(500, 200, 30, 6);
    SinnamonIndex idx(config(200, 6, 2));
    for (const auto& d : docs) {
        idx.insert(d);
    }
    SparseVector q = gaussian_set(1, 200, 20, 7, 100000)[0];
    auto scored = idx.score(q, {});
    for (const auto& d : docs) {
        Slot s = idx.id_map().slot_of(d.id);
        double gap = 0.0;
        for (std::size_t i = 0; i < q.nnz(); ++i) {
            float x = d.at(q.coords[i]);
            bool active = std::binary_search(d.coords.begin(), d.coords.end(), q.coords[i]);
            if (!active) {
                continue;
            }
            float dec = idx.decode(s, q.coords[i], q.values[i] > 0 ? Sign::Positive : Sign::Negative);
            gap += static_cast<double>(q.values[i]) * (static_cast<double>(dec) - static_cast<double>(x));
        }
        EXPECT_NEAR(scored.scores[s] - inner_product(q, d), gap, 1e-9);
        EXPECT_GE(gap, 0.0);
    }
}

TEST(SinnamonScore, NeverBelowExactInnerProduct) {
    auto docs = gaussian_set(5000, 1000, 40, 8);
    auto queries = gaussian_set(50, 1000, 10, 9, 100000);
    for (std::uint32_t h : {1U, 2U}) {
        SinnamonIndex idx(config(1000, 10, h));
        for (const auto& d : docs) {
            idx.insert(d);
        }
        std::size_t bad = 0;
        for (const auto& q : queries) {
            auto scored = idx.score(q, {});
            for (const auto& d : docs) {
                bad += scored.scores[idx.id_map().slot_of(d.id)] < inner_product(q, d);
            }
        }
        EXPECT_EQ(bad, 0U) << "h=" << h;
    }
}

TEST(SinnamonScore, PlusVariantMatchesFullOnNonNegativeData) {
    auto docs = abs_values(gaussian_set(2000, 500, 30, 10));
    auto queries = abs_values(gaussian_set(20, 500, 10, 11, 100000));
    SinnamonIndex full(config(500, 12, 2));
    SinnamonIndex plus(config(500, 12, 2, true));
    for (const auto& d : docs) {
        full.insert(d);
        plus.insert(d);
    }
    for (const auto& q : queries) {
        EXPECT_EQ(full.score(q, {}).scores, plus.score(q, {}).scores);
    }
}

TEST(SinnamonScore, PlusVariantIgnoresNegativeQueryEntries) {
    SinnamonIndex plus(config(10, 4, 1, true));
    plus.insert({1, {1, 2}, {1.0F, 2.0F}});
    auto s = plus.score({0, {1, 2}, {-5.0F, 1.0F}}, {});
    EXPECT_EQ(s.scores[0], 2.0);
}

TEST(SinnamonRank, FullPoolEqualsExactTopK) {
    auto docs = gaussian_set(3000, 500, 25, 12);
    auto queries = gaussian_set(20, 500, 10, 13, 100000);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(500, 8, 1))};
    Collection<RawLinScan> ls{RawLinScan(500)};
    for (const auto& d : docs) {
        sk.insert(d);
        ls.insert(d);
    }
    for (const auto& q : queries) {
        auto got = sk.search(q, params(10, 3000));
        auto want = ls.search(q, params(10, 10));
        EXPECT_EQ(got.hits, want.hits);
    }
}

TEST(SinnamonRank, PoolOfKWithoutCollisionsIsExact) {
    SinnamonIndex probe(config(100000, 4096, 1));
    auto coords = distinct_row_coords(probe, 200);
    ASSERT_EQ(coords.size(), 200U);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(100000, 4096, 1))};
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> pick(1, 64);
    std::vector<SparseVector> docs;
    for (ExternalId id = 0; id < 300; ++id) {
        SparseVector v{id, {}, {}};
        for (std::size_t i = 0; i < coords.size(); i += 1 + static_cast<std::size_t>(rng() % 20)) {
            v.coords.push_back(coords[i]);
            v.values.push_back(static_cast<float>(pick(rng)) / 16.0F);
        }
        docs.push_back(v);
        sk.insert(v);
    }
    SparseVector q{1000, {coords[0], coords[7], coords[50]}, {1.0F, -2.0F, 0.5F}};
    auto slot_of = [&](ExternalId id) { return sk.engine().id_map().slot_of(id); };
    EXPECT_EQ(sk.search(q, params(5, 5)).sorted_ids(), brute_force_top_k(q, docs, 5, slot_of));
}

TEST(SinnamonRetrieve, ThreadCountDoesNotChangeHits) {
    auto docs = gaussian_set(4000, 800, 30, 15);
    auto queries = gaussian_set(20, 800, 12, 16, 100000);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(800, 11, 2))};
    for (const auto& d : docs) {
        sk.insert(d);
    }
    for (const auto& q : queries) {
        auto one = sk.search(q, params(10, 100));
        for (std::uint32_t t : {2U, 8U}) {
            EXPECT_EQ(sk.search(q, params(10, 100, Budget::infinite(), t)).hits, one.hits);
        }
    }
}

TEST(SinnamonRetrieve, ZeroBudgetIsWellFormed) {
    auto docs = gaussian_set(2000, 300, 20, 17);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(300, 10, 1))};
    for (const auto& d : docs) {
        sk.insert(d);
    }
    SparseVector q = gaussian_set(1, 300, 20, 18, 100000)[0];
    auto r = sk.search(q, params(10, 50, Budget::millis(0)));
    EXPECT_LE(r.hits.size(), 10U);
    for (const auto& h : r.hits) {
        EXPECT_EQ(h.score, inner_product(q, sk.store().fetch(h.id)));
    }
    EXPECT_LE(sk.engine().score(q, ScoreOptions{Budget::millis(0), 1}).coords_processed, 1U);
}

TEST(SinnamonRetrieve, EmptyIndexGivesEmptyResult) {
    Collection<SinnamonIndex> sk{SinnamonIndex(config(10, 4, 1))};
    EXPECT_TRUE(sk.search({0, {1}, {1.0F}}, params(5, 10)).hits.empty());
}

TEST(SinnamonDelete, DeletedVectorNeverReturned) {
    auto docs = gaussian_set(500, 100, 20, 19);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(100, 10, 1))};
    for (const auto& d : docs) {
        sk.insert(d);
    }
    SparseVector q = gaussian_set(1, 100, 10, 20, 100000)[0];
    auto before = sk.search(q, params(10, 500));
    ASSERT_FALSE(before.hits.empty());
    ExternalId gone = before.hits[0].id;
    sk.erase(gone);
    for (const auto& h : sk.search(q, params(500, 500)).hits) {
        EXPECT_NE(h.id, gone);
    }
    EXPECT_THROW(sk.erase(gone), UnknownId);
}

TEST(SinnamonDelete, RecycledColumnDecodesNewVector) {
    Collection<SinnamonIndex> sk{SinnamonIndex(config(1000, 6, 2))};
    auto docs = gaussian_set(50, 1000, 30, 21);
    for (const auto& d : docs) {
        sk.insert(d);
    }
    Slot old = sk.engine().id_map().slot_of(docs[10].id);
    sk.erase(docs[10].id);
    SparseVector fresh{777, {3, 500, 999}, {-0.75F, 0.125F, 4.0F}};
    sk.insert(fresh);
    EXPECT_EQ(sk.engine().id_map().slot_of(777), old);
    EXPECT_EQ(sk.engine().id_map().slot_capacity(), 50U);
    for (std::size_t i = 0; i < fresh.nnz(); ++i) {
        EXPECT_GE(sk.engine().decode(old, fresh.coords[i], Sign::Positive), fresh.values[i]);
        EXPECT_LE(sk.engine().decode(old, fresh.coords[i], Sign::Negative), fresh.values[i]);
    }
    for (std::uint32_t r = 0; r < 6; ++r) {
        float u = sk.engine().sketch().upper(r, old);
        EXPECT_TRUE(u == 0.0F || u == up(-0.75F) || u == up(0.125F) || u == up(4.0F)) << u;
    }
}

TEST(SinnamonDelete, TouchesOnlyIdSets) {
    auto docs = gaussian_set(2000, 400, 25, 22);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(400, 12, 2))};
    for (const auto& d : docs) {
        sk.insert(d);
    }
    auto before = sk.engine().counters();
    std::size_t nnz = 0;
    for (ExternalId id = 0; id < 100; ++id) {
        nnz += docs[id].nnz();
        sk.erase(id);
    }
    auto after = sk.engine().counters();
    EXPECT_EQ(after.sketch_cells_written, before.sketch_cells_written);
    EXPECT_EQ(after.sketch_cells_read, before.sketch_cells_read);
    EXPECT_EQ(after.idset_removals - before.idset_removals, nnz);
}

TEST(SinnamonDelete, SlotCountTracksPeakLiveCount) {
    auto pool = gaussian_set(3000, 300, 15, 23);
    Collection<SinnamonIndex> sk{SinnamonIndex(config(300, 8, 1))};
    std::mt19937_64 rng(24);
    std::vector<ExternalId> live;
    std::size_t peak = 0;
    std::size_t next = 0;
    while (next < pool.size()) {
        if (live.empty() || rng() % 3 != 0) {
            sk.insert(pool[next]);
            live.push_back(pool[next++].id);
        } else {
            std::size_t i = rng() % live.size();
            sk.erase(live[i]);
            live[i] = live.back();
            live.pop_back();
        }
        peak = std::max(peak, live.size());
    }
    EXPECT_EQ(sk.engine().id_map().slot_capacity(), peak);
    EXPECT_EQ(sk.engine().sketch().columns(), peak);
}

TEST(HashMappings, StableAndInRange) {
    HashMappings a(37, 3, 99);
    HashMappings b(37, 3, 99);
    HashMappings c(37, 3, 100);
    std::size_t differ = 0;
    std::vector<std::size_t> hist(37, 0);
    for (Coord j = 0; j < 37000; ++j) {
        for (std::uint32_t o = 0; o < 3; ++o) {
            ASSERT_LT(a.row(o, j), 37U);
            ASSERT_EQ(a.row(o, j), b.row(o, j));
            differ += a.row(o, j) != c.row(o, j);
        }
        ++hist[a.row(0, j)];
    }
    EXPECT_GT(differ, 90000U);
    for (auto n : hist) {
        EXPECT_NEAR(static_cast<double>(n), 1000.0, 200.0);
    }
}

}  // namespace
}  // namespace sinnamon
