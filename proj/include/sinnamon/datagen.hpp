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
#include <random>
#include <vector>

#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/sketch.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

/// Synthetic collection: `count` vectors over `dims` coordinates, each
/// coordinate independently active with probability psi / dims, active
/// values i.i.d. from `dist`. Ids run from `first_id`.
struct GenSpec {
    std::uint64_t count = 0;
    std::uint32_t dims = 0;
    double psi = 0.0;
    analysis::ValueDist dist = analysis::ValueDist::gaussian(0.0, 1.0);
    std::uint64_t seed = 0;
    ExternalId first_id = 0;

    void validate() const {
        if (dims < 1 || !(psi > 0.0) || psi > static_cast<double>(dims)) {
            throw InvalidArgument("generator needs dims >= 1 and 0 < psi <= dims");
        }
    }
};

/// Vector `index` of the collection. Each vector has its own generator,
/// seeded from (seed, index), so any subset can be produced independently.
inline SparseVector generate_one(const GenSpec& spec, std::uint64_t index) {
    std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(index)));
    SparseVector v;
    v.id = spec.first_id + index;
    const double p = spec.psi / spec.dims;
    auto emit = [&](Coord c) {
        float x = 0.0F;
        while (x == 0.0F) {
            x = static_cast<float>(spec.dist.sample(rng));
        }
        v.coords.push_back(c);
        v.values.push_back(x);
    };
    if (p >= 1.0) {
        for (Coord c = 0; c < spec.dims; ++c) {
            emit(c);
        }
        return v;
    }
    // Skipping ahead by geometric gaps visits exactly the Bernoulli(p) successes.
    std::geometric_distribution<std::uint64_t> gap(p);
    for (std::uint64_t c = gap(rng); c < spec.dims; c += 1 + gap(rng)) {
        emit(static_cast<Coord>(c));
    }
    return v;
}

inline std::vector<SparseVector> generate(const GenSpec& spec, std::uint32_t threads = 1) {
    spec.validate();
    std::vector<SparseVector> out(spec.count);
    std::size_t workers = std::max<std::uint32_t>(threads, 1);
    auto ranges = split_range(spec.count, workers);
    parallel_for(workers, [&](std::size_t w) {
        for (std::size_t i = ranges[w].begin; i < ranges[w].end; ++i) {
            out[i] = generate_one(spec, i);
        }
    });
    return out;
}

}  // namespace sinnamon
