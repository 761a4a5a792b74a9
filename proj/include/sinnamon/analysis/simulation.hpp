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
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "sinnamon/analysis/inner_product_error.hpp"
#include "sinnamon/analysis/sketch_error.hpp"
#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/parallel.hpp"
#include "sinnamon/sketch.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon::analysis {

/// Monte-Carlo run settings. Results are reproducible for a fixed
/// (seed, workers) pair: worker w draws from its own generator seeded by
/// worker_seed(seed, w) and handles a fixed share of the trials.
struct SimulationConfig {
    std::uint64_t trials = 100000;
    std::uint32_t workers = 1;
    std::uint64_t seed = 0;
};

inline std::uint64_t worker_seed(std::uint64_t seed, std::size_t worker) {
    return splitmix64(seed ^ splitmix64(0xA5A5A5A5ULL + worker));
}

/// Error samples with summary accessors. Samples are kept sorted.
class ErrorSamples {
  public:
    ErrorSamples() = default;
    explicit ErrorSamples(std::vector<double> samples) : samples_(std::move(samples)) {
        std::sort(samples_.begin(), samples_.end());
    }

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const std::vector<double>& sorted() const noexcept { return samples_; }

    /// Fraction of samples <= delta.
    double cdf(double delta) const {
        if (samples_.empty()) {
            return 0.0;
        }
        auto it = std::upper_bound(samples_.begin(), samples_.end(), delta);
        return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
    }

    /// Fraction of samples strictly above zero.
    double prob_positive() const { return 1.0 - cdf(0.0); }

    /// Fraction of samples strictly below zero.
    double prob_negative() const {
        if (samples_.empty()) {
            return 0.0;
        }
        auto it = std::lower_bound(samples_.begin(), samples_.end(), 0.0);
        return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
    }

    double mean() const {
        if (samples_.empty()) {
            return 0.0;
        }
        double s = 0.0;
        for (double x : samples_) {
            s += x;
        }
        return s / static_cast<double>(samples_.size());
    }

    double stddev() const {
        if (samples_.size() < 2) {
            return 0.0;
        }
        double mu = mean();
        double s = 0.0;
        for (double x : samples_) {
            s += (x - mu) * (x - mu);
        }
        return std::sqrt(s / static_cast<double>(samples_.size() - 1));
    }

  private:
    std::vector<double> samples_;
};

namespace detail {

inline std::uint32_t integral_rows(const SketchParams& params) {
    params.validate();
    double r = std::round(params.m);
    if (r != params.m || r > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        throw InvalidArgument("simulation needs an integral row count");
    }
    return static_cast<std::uint32_t>(r);
}

/// Runs trials split across workers; trial_fn(rng, out) appends samples.
template <typename TrialFn>
std::vector<double> run_trials(const SimulationConfig& cfg, TrialFn&& trial_fn) {
    std::size_t workers = std::max<std::uint32_t>(cfg.workers, 1);
    auto ranges = split_range(cfg.trials, workers);
    std::vector<std::vector<double>> parts(workers);
    parallel_for(workers, [&](std::size_t w) {
        std::mt19937_64 rng(worker_seed(cfg.seed, w));
        parts[w].reserve(ranges[w].size());
        for (std::size_t t = ranges[w].begin; t < ranges[w].end; ++t) {
            trial_fn(rng, parts[w]);
        }
    });
    std::vector<double> all;
    all.reserve(cfg.trials);
    for (auto& p : parts) {
        all.insert(all.end(), p.begin(), p.end());
    }
    return all;
}

}  // namespace detail

/// Simulates the upper-bound sketch error of one active coordinate. Each
/// trial draws Poisson(np) other active coordinates, gives every coordinate
/// h uniformly random rows, builds the max sketch and records decoded minus
/// true value.
inline ErrorSamples simulate_sketch_error(const ValueDist& dist, const SketchParams& params,
                                          const SimulationConfig& cfg) {
    const std::uint32_t m = detail::integral_rows(params);
    const std::uint32_t h = params.h;
    auto samples = detail::run_trials(cfg, [&](std::mt19937_64& rng, std::vector<double>& out) {
        thread_local std::vector<double> acc;
        thread_local std::vector<std::uint32_t> own;
        acc.assign(m, -std::numeric_limits<double>::infinity());
        own.resize(h);
        std::uniform_int_distribution<std::uint32_t> row(0, m - 1);
        std::poisson_distribution<std::uint64_t> others(params.np);
        const double x = dist.sample(rng);
        for (std::uint32_t o = 0; o < h; ++o) {
            own[o] = row(rng);
            acc[own[o]] = std::max(acc[own[o]], x);
        }
        std::uint64_t k = others(rng);
        for (std::uint64_t i = 0; i < k; ++i) {
            const double v = dist.sample(rng);
            for (std::uint32_t o = 0; o < h; ++o) {
                auto r = row(rng);
                acc[r] = std::max(acc[r], v);
            }
        }
        double decoded = std::numeric_limits<double>::infinity();
        for (std::uint32_t r : own) {
            decoded = std::min(decoded, acc[r]);
        }
        out.push_back(decoded - x);
    });
    return ErrorSamples(std::move(samples));
}

/// Simulates the standardized inner-product error. Each trial draws a query
/// with `psi_q` standard-normal entries and a document active on all of
/// them plus Poisson(np - psi_q + 1) further coordinates. The document is
/// sketched with real max/min rows and the error is standardized with the
/// moments from error_moments.
inline ErrorSamples simulate_z(const ValueDist& dist, const SketchParams& params, std::uint32_t psi_q,
                               const SimulationConfig& cfg) {
    const std::uint32_t m = detail::integral_rows(params);
    const std::uint32_t h = params.h;
    if (psi_q < 1 || !(params.np - psi_q + 1.0 > 0.0)) {
        throw InvalidArgument("simulate_z needs 1 <= psi_q <= np + 1");
    }
    const CoordErrorStats stats = coord_error_stats(dist, params, 1.0);
    const std::vector<CoordErrorStats> per_coord(psi_q, stats);
    auto samples = detail::run_trials(cfg, [&](std::mt19937_64& rng, std::vector<double>& out) {
        std::vector<double> up(m, -std::numeric_limits<double>::infinity());
        std::vector<double> lo(m, std::numeric_limits<double>::infinity());
        std::vector<std::uint32_t> rows(static_cast<std::size_t>(psi_q) * h);
        std::vector<double> x(psi_q);
        std::uniform_int_distribution<std::uint32_t> row(0, m - 1);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::poisson_distribution<std::uint64_t> others(params.np - psi_q + 1.0);

        SparseVector q;
        for (std::uint32_t i = 0; i < psi_q; ++i) {
            float qi = 0.0F;
            while (qi == 0.0F) {
                qi = static_cast<float>(normal(rng));
            }
            q.coords.push_back(i);
            q.values.push_back(qi);
        }
        auto place = [&](double v, std::uint32_t* own) {
            for (std::uint32_t o = 0; o < h; ++o) {
                auto r = row(rng);
                if (own != nullptr) {
                    own[o] = r;
                }
                up[r] = std::max(up[r], v);
                lo[r] = std::min(lo[r], v);
            }
        };
        for (std::uint32_t i = 0; i < psi_q; ++i) {
            x[i] = dist.sample(rng);
            place(x[i], rows.data() + static_cast<std::size_t>(i) * h);
        }
        std::uint64_t k = others(rng);
        for (std::uint64_t i = 0; i < k; ++i) {
            place(dist.sample(rng), nullptr);
        }
        double diff = 0.0;
        for (std::uint32_t i = 0; i < psi_q; ++i) {
            const double qi = q.values[i];
            double decoded = qi > 0.0 ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
            for (std::uint32_t o = 0; o < h; ++o) {
                auto r = rows[static_cast<std::size_t>(i) * h + o];
                decoded = qi > 0.0 ? std::min(decoded, up[r]) : std::max(decoded, lo[r]);
            }
            diff += qi * (decoded - x[i]);
        }
        out.push_back(z_statistic(q, diff, per_coord));
    });
    return ErrorSamples(std::move(samples));
}

}  // namespace sinnamon::analysis
