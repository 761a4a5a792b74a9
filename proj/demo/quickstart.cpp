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
#include <cstdio>

#include "sinnamon/all.hpp"

int main() {
    using namespace sinnamon;

    GenSpec docs_spec;
    docs_spec.count = 20000;
    docs_spec.dims = 5000;
    docs_spec.psi = 40;
    docs_spec.seed = 1;
    auto docs = generate(docs_spec);

    GenSpec query_spec = docs_spec;
    query_spec.count = 5;
    query_spec.psi = 10;
    query_spec.seed = 2;
    query_spec.first_id = 1000000;
    auto queries = generate(query_spec);

    Collection<RawLinScan> exact{RawLinScan(docs_spec.dims)};
    Collection<SinnamonIndex> sketch{SinnamonIndex(EngineConfig{docs_spec.dims, 40, 1, 7, false})};
    for (const auto& d : docs) {
        exact.insert(d);
        sketch.insert(d);
    }

    QueryParams params;
    params.k = 10;
    params.k_prime = 500;
    for (const auto& q : queries) {
        auto want = exact.search(q, params).sorted_ids();
        auto got = sketch.search(q, params);
        std::size_t found = 0;
        for (const auto& h : got.hits) {
            found += std::binary_search(want.begin(), want.end(), h.id) ? 1 : 0;
        }
        std::printf("query %llu: top hit %llu score %.4f, recall@10 %.1f\n", static_cast<unsigned long long>(q.id),
                    static_cast<unsigned long long>(got.hits.front().id), got.hits.front().score,
                    static_cast<double>(found) / static_cast<double>(want.size()));
    }

    analysis::SketchParams shape{40, 1, docs_spec.psi};
    std::printf("P[upper bound overestimates] = %.3f\n",
                analysis::prob_overestimate(analysis::ValueDist::gaussian(0, 1), shape));
    return 0;
}
