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

#include <cmath>
#include <span>

#include "sinnamon/analysis/sketch_error.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon::analysis {

/// Unconditional mean and variance of a per-coordinate error that is zero
/// when the coordinate is inactive (probability 1 - p) and has conditional
/// mean `mean` and deviation `stddev` when active.
inline Moments zi_moments(double p, double mean, double stddev) {
    if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(mean) || !(stddev >= 0.0) || !std::isfinite(stddev)) {
        throw InvalidArgument("zi_moments needs p in [0,1], finite mean and stddev >= 0");
    }
    return {p * mean, p * stddev * stddev + p * (1.0 - p) * mean * mean};
}

/// Per-coordinate error statistics: activity probability and the
/// conditional moments of the upper-sketch error (used for positive query
/// entries) and lower-sketch error (negative entries).
struct CoordErrorStats {
    double p = 1.0;
    Moments upper;
    Moments lower;
};

/// Statistics for a coordinate active with probability `p`, values from
/// `dist`, under the given sketch shape.
inline CoordErrorStats coord_error_stats(const ValueDist& dist, const SketchParams& params, double p) {
    return {p, error_moments(dist, params), lower_error_moments(dist, params)};
}

/// Standardized inner-product error:
///   (approx_minus_exact - sum_i q_i E_i) / sqrt(sum_i q_i^2 V_i)
/// where (E_i, V_i) = zi_moments of coordinate i, taken from the upper or
/// lower statistics by the sign of q_i. `stats` is aligned with q's entries.
inline double z_statistic(const SparseVector& q, double approx_minus_exact, std::span<const CoordErrorStats> stats) {
    if (stats.size() != q.nnz()) {
        throw InvalidArgument("z_statistic needs one stats entry per query entry");
    }
    double shift = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < q.nnz(); ++i) {
        const double qi = q.values[i];
        const Moments& cond = qi > 0.0 ? stats[i].upper : stats[i].lower;
        Moments m = zi_moments(stats[i].p, cond.mean, std::sqrt(cond.variance));
        shift += qi * m.mean;
        var += qi * qi * m.variance;
    }
    if (!(var > 0.0)) {
        throw NumericError("z_statistic: zero variance");
    }
    return (approx_minus_exact - shift) / std::sqrt(var);
}

}  // namespace sinnamon::analysis
