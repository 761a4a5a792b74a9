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

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "sinnamon/error.hpp"
#include "sinnamon/id_map.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/top_k.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {
namespace {

std::set<Slot> slot_set(const std::vector<ScoredSlot>& v) {
    std::set<Slot> out;
    for (const auto& s : v) {
        out.insert(s.slot);
    }
    return out;
}

std::vector<ScoredSlot> full_sort_oracle(const std::vector<double>& scores, std::size_t k) {
    std::vector<ScoredSlot> all;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        all.push_back({static_cast<Slot>(i), scores[i]});
    }
    std::stable_sort(all.begin(), all.end(), [](const ScoredSlot& a, const ScoredSlot& b) { return a.score > b.score; });
    all.resize(std::min(k, all.size()));
    return all;
}

TEST(FindLargest, DirectOrdering) {
    std::vector<double> s{0.5, 2.0, 1.0};
    auto got = find_largest(s, 2);
    ASSERT_EQ(got.size(), 2U);
    EXPECT_EQ(got[0].slot, 1U);
    EXPECT_EQ(got[1].slot, 2U);
}

TEST(FindLargest, EqualScoresKeepEarliestSlots) {
    std::vector<double> s(5, 0.0);
    EXPECT_EQ(slot_set(find_largest(s, 2)), (std::set<Slot>{0, 1}));
}

TEST(FindLargest, EmptyScoresGiveEmptyResult) {
    std::vector<double> s;
    EXPECT_TRUE(find_largest(s, 3).empty());
}

TEST(FindLargest, ShorterThanKOnlyWhenFewerSlots) {
    std::vector<double> s{1.0, -1.0};
    EXPECT_EQ(find_largest(s, 5).size(), 2U);
}

TEST(FindLargest, MatchesFullSortOracle) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s(1000);
        for (auto& x : s) {
            x = u(rng);
        }
        auto got = find_largest(s, 10);
        auto want = full_sort_oracle(s, 10);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].slot, want[i].slot);
            EXPECT_EQ(got[i].score, want[i].score);
        }
    }
}

TEST(FindLargest, MatchesOracleWithHeavyTies) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> u(0, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> s(300);
        for (auto& x : s) {
            x = u(rng);
        }
        EXPECT_EQ(slot_set(find_largest(s, 17)), slot_set(full_sort_oracle(s, 17)));
    }
}

TEST(FindLargest, MaskedSlotsAreNeverAdmitted) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> s{-inf, 1.0, -inf};
    auto got = find_largest(s, 3);
    ASSERT_EQ(got.size(), 1U);
    EXPECT_EQ(got[0].slot, 1U);
}

TEST(FindLargest, MergeOfRangesEqualsWholeSelection) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(0, 9);
    std::vector<double> s(997);
    for (auto& x : s) {
        x = u(rng);
    }
    auto ranges = split_range(s.size(), 4);
    std::vector<std::vector<ScoredSlot>> parts;
    for (const auto& r : ranges) {
        parts.push_back(find_largest(std::span<const double>(s.data() + r.begin, r.size()), 25, static_cast<Slot>(r.begin)));
    }
    auto merged = merge_largest(parts, 25);
    auto whole = find_largest(s, 25);
    ASSERT_EQ(merged.size(), whole.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        EXPECT_EQ(merged[i].slot, whole[i].slot);
    }
}

SparseVector vec(ExternalId id, std::vector<Coord> c, std::vector<float> v) {
    return SparseVector{id, std::move(c), std::move(v)};
}

TEST(InnerProduct, DisjointSupportsGiveZero) {
    EXPECT_EQ(inner_product(vec(0, {1}, {2.0F}), vec(1, {2}, {3.0F})), 0.0);
}

TEST(InnerProduct, TwoTermHandComputation) {
    EXPECT_EQ(inner_product(vec(0, {1, 5}, {2.0F, -1.0F}), vec(1, {1, 5}, {0.5F, 4.0F})), -3.0);
}

SparseVector random_vector(std::mt19937_64& rng, std::uint32_t dims, std::size_t nnz, ExternalId id) {
    std::vector<Coord> all(dims);
    std::iota(all.begin(), all.end(), 0U);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(nnz);
    std::sort(all.begin(), all.end());
    std::normal_distribution<float> g(0.0F, 1.0F);
    SparseVector v{id, all, {}};
    for (std::size_t i = 0; i < nnz; ++i) {
        float x = 0.0F;
        while (x == 0.0F) {
            x = g(rng);
        }
        v.values.push_back(x);
    }
    return v;
}

TEST(InnerProduct, MatchesDenseOracle) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        auto a = random_vector(rng, 1000, 50, 0);
        auto b = random_vector(rng, 1000, 50, 1);
        std::vector<double> da(1000, 0.0);
        std::vector<double> db(1000, 0.0);
        for (std::size_t i = 0; i < 50; ++i) {
            da[a.coords[i]] = a.values[i];
            db[b.coords[i]] = b.values[i];
        }
        double want = std::inner_product(da.begin(), da.end(), db.begin(), 0.0);
        EXPECT_NEAR(inner_product(a, b), want, 1e-9 * std::max(1.0, std::fabs(want)));
    }
}

TEST(InnerProduct, SymmetricAndScales) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<float> u(-3.0F, 3.0F);
    for (int t = 0; t < 50; ++t) {
        auto a = random_vector(rng, 200, 30, 0);
        auto b = random_vector(rng, 200, 30, 1);
        double ab = inner_product(a, b);
        EXPECT_NEAR(ab, inner_product(b, a), 1e-9 * std::max(1.0, std::fabs(ab)));
        float c = u(rng);
        auto sa = a;
        for (auto& x : sa.values) {
            x *= c;
        }
        EXPECT_NEAR(inner_product(sa, b), c * ab, 1e-5 * std::max(1.0, std::fabs(c * ab)));
    }
}

TEST(SparseVectorValidate, RejectsBadVectors) {
    EXPECT_NO_THROW(vec(0, {1, 3}, {1.0F, 2.0F}).validate(4));
    EXPECT_THROW(vec(0, {3, 1}, {1.0F, 2.0F}).validate(), InvalidArgument);
    EXPECT_THROW(vec(0, {1, 1}, {1.0F, 2.0F}).validate(), InvalidArgument);
    EXPECT_THROW(vec(0, {1}, {0.0F}).validate(), InvalidArgument);
    EXPECT_THROW(vec(0, {1}, {std::numeric_limits<float>::infinity()}).validate(), InvalidArgument);
    EXPECT_THROW(vec(0, {4}, {1.0F}).validate(4), InvalidArgument);
    EXPECT_THROW(vec(0, {1, 2}, {1.0F}).validate(), InvalidArgument);
}

TEST(QueryParams, Validation) {
    QueryParams p;
    EXPECT_NO_THROW(p.validate());
    p.k = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p.k = 10;
    p.k_prime = 5;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p.k_prime = 10;
    p.threads = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    EXPECT_THROW(Budget::millis(-1.0), InvalidArgument);
}

TEST(IdMap, FirstAssignIsSlotZero) {
    IdMap m;
    EXPECT_EQ(m.assign(7), 0U);
}

TEST(IdMap, ReleasedSlotIsRecycled) {
    IdMap m;
    m.assign(7);
    m.release(7);
    EXPECT_EQ(m.assign(9), 0U);
    EXPECT_EQ(m.ext_of(0), 9U);
    EXPECT_EQ(m.slot_capacity(), 1U);
}

TEST(IdMap, DistinctErrorsForDuplicateAndUnknown) {
    IdMap m;
    m.assign(1);
    EXPECT_THROW(m.assign(1), DuplicateId);
    EXPECT_THROW(m.release(2), UnknownId);
}

TEST(IdMap, MaxSlotEqualsMaxLiveUnderInterleaving) {
    IdMap m;
    std::mt19937_64 rng(6);
    std::vector<ExternalId> live;
    ExternalId next = 0;
    std::size_t max_live = 0;
    for (int op = 0; op < 10000; ++op) {
        if (live.empty() || rng() % 3 != 0) {
            Slot s = m.assign(next);
            EXPECT_FALSE(std::any_of(live.begin(), live.end(), [&](ExternalId e) { return m.slot_of(e) == s; }));
            live.push_back(next++);
        } else {
            std::size_t i = rng() % live.size();
            m.release(live[i]);
            live[i] = live.back();
            live.pop_back();
        }
        max_live = std::max(max_live, live.size());
        if (op % 500 == 0) {
            std::set<Slot> slots;
            for (auto e : live) {
                Slot s = m.slot_of(e);
                EXPECT_TRUE(m.is_live(s));
                EXPECT_EQ(m.ext_of(s), e);
                slots.insert(s);
            }
            EXPECT_EQ(slots.size(), live.size());
        }
    }
    EXPECT_EQ(m.slot_capacity(), max_live);
    EXPECT_EQ(m.live_count(), live.size());
}

TEST(SplitRange, CoversEverythingOnce) {
    for (std::size_t n : {0U, 1U, 7U, 100U}) {
        for (std::size_t w : {1U, 3U, 8U}) {
            auto r = split_range(n, w);
            ASSERT_EQ(r.size(), w);
            std::size_t expect = 0;
            for (const auto& x : r) {
                EXPECT_EQ(x.begin, expect);
                expect = x.end;
            }
            EXPECT_EQ(expect, n);
        }
    }
}

TEST(ParallelFor, RunsEveryWorker) {
    std::vector<int> hit(6, 0);
    parallel_for(6, [&](std::size_t w) { hit[w] = 1; });
    EXPECT_EQ(std::accumulate(hit.begin(), hit.end(), 0), 6);
}

}  // namespace
}  // namespace sinnamon
