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
#include <functional>
#include <map>
#include <thread>
#include <tuple>
#include <vector>

#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/datagen.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon::testing {

inline std::vector<SparseVector> gaussian_set(std::uint64_t count, std::uint32_t dims, double psi, std::uint64_t seed,
                                              ExternalId first_id = 0) {
    GenSpec spec;
    spec.count = count;
    spec.dims = dims;
    spec.psi = psi;
    spec.seed = seed;
    spec.first_id = first_id;
    return generate(spec);
}

inline std::vector<SparseVector> abs_values(std::vector<SparseVector> v) {
    for (auto& x : v) {
        for (auto& f : x.values) {
            f = std::fabs(f);
        }
    }
    return v;
}

/// Dense brute-force scores over `docs`; ties rank by `slot_of`.
inline std::vector<ExternalId> brute_force_top_k(const SparseVector& q, const std::vector<SparseVector>& docs,
                                                 std::size_t k, const std::function<Slot(ExternalId)>& slot_of,
                                                 const std::function<float(float)>& quantize = [](float x) { return x; }) {
    std::map<Coord, double> dense;
    for (std::size_t i = 0; i < q.nnz(); ++i) {
        dense[q.coords[i]] = q.values[i];
    }
    std::vector<std::tuple<double, Slot, ExternalId>> all;
    for (const auto& d : docs) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.nnz(); ++i) {
            auto it = dense.find(d.coords[i]);
            if (it != dense.end()) {
                s += it->second * static_cast<double>(quantize(d.values[i]));
            }
        }
        all.emplace_back(s, slot_of(d.id), d.id);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) > std::get<0>(b) : std::get<1>(a) < std::get<1>(b);
    });
    std::vector<ExternalId> out;
    for (std::size_t i = 0; i < std::min(k, all.size()); ++i) {
        out.push_back(std::get<2>(all[i]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline QueryParams params(std::uint32_t k, std::uint32_t k_prime, Budget budget = Budget::infinite(),
                          std::uint32_t threads = 1) {
    QueryParams p;
    p.k = k;
    p.k_prime = k_prime;
    p.budget = budget;
    p.threads = threads;
    return p;
}

}  // namespace sinnamon::testing
