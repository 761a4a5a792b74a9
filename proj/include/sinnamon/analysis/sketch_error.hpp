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
#include <numbers>

#include "sinnamon/analysis/quadrature.hpp"
#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/error.hpp"

namespace sinnamon::analysis {

/// Sketch shape for the error formulas. `np` is the expected number of other
/// active coordinates in a vector, the sum of their activity probabilities.
struct SketchParams {
    double m = 1.0;
    std::uint32_t h = 1;
    double np = 1.0;

    void validate() const {
        if (!(m >= 1.0) || h < 1 || !(np > 0.0) || !std::isfinite(m) || !std::isfinite(np)) {
            throw InvalidArgument("sketch parameters need m >= 1, h >= 1, np > 0");
        }
    }
};

/// Conditional moments of a non-negative error given the coordinate is active.
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

namespace detail {

/// Probability that every one of the h rows of a coordinate was overwritten
/// by some other coordinate whose value exceeds the threshold; `tail` is the
/// probability that another active value exceeds it.
inline double all_rows_exceeded(double tail, const SketchParams& p) {
    double hits = -std::expm1(-(static_cast<double>(p.h) / p.m) * std::max(tail, 0.0) * p.np);
    return std::pow(hits, static_cast<double>(p.h));
}

}  // namespace detail

/// P[decoded upper bound exceeds the true value by more than delta], for an
/// active coordinate: the integral over alpha of
/// (1 - exp(-(h/m) * P[X > alpha + delta] * np))^h * pdf(alpha).
inline double overestimate_survival(const ValueDist& dist, const SketchParams& params, double delta) {
    params.validate();
    if (!(delta >= 0.0)) {
        throw InvalidArgument("delta must be >= 0");
    }
    if (dist.is_discrete()) {
        double total = 0.0;
        const auto& xs = dist.support();
        const auto& ps = dist.pmf();
        for (std::size_t k = 0; k < xs.size(); ++k) {
            total += ps[k] * detail::all_rows_exceeded(dist.survival(xs[k] + delta), params);
        }
        return total;
    }
    auto f = [&](double a) { return detail::all_rows_exceeded(dist.survival(a + delta), params) * dist.pdf(a); };
    double lo = dist.lower();
    double hi = dist.upper();
    if (dist.kind() == ValueDist::Kind::Uniform) {
        hi = std::min(hi, dist.upper() - delta);
    }
    return integrate(f, lo, hi, kInnerTolerance);
}

/// P[decoded upper bound > true value].
inline double prob_overestimate(const ValueDist& dist, const SketchParams& params) {
    return overestimate_survival(dist, params, 0.0);
}

/// Closed form of prob_overestimate for Gaussian values:
/// 1 + sum_{k=1..h} C(h,k) (-1)^k m/(k h np) (1 - exp(-k h np / m)).
inline double prob_overestimate_gaussian(const SketchParams& params) {
    params.validate();
    const double h = params.h;
    double total = 1.0;
    double binom = 1.0;
    for (std::uint32_t k = 1; k <= params.h; ++k) {
        binom = binom * (h - k + 1) / k;
        double rate = k * h * params.np / params.m;
        double sign = (k % 2 == 1) ? -1.0 : 1.0;
        total += sign * binom * (-std::expm1(-rate)) / rate;
    }
    return total;
}

/// P[decoded upper bound - true value <= delta].
inline double error_cdf(const ValueDist& dist, const SketchParams& params, double delta) {
    return 1.0 - overestimate_survival(dist, params, delta);
}

/// P[X_j - X_i > delta] for independent Gaussian(., sigma) values: the tail
/// of a zero-mean Gaussian with deviation sigma * sqrt(2).
inline double gaussian_difference_tail(double sigma, double delta) {
    return 0.5 * std::erfc(delta / (2.0 * sigma));
}

/// Closed-form approximation of error_cdf for Gaussian(0, sigma) values:
/// 1 - (1 - exp(-(h np / m) * P[X_j - X_i > delta]))^h.
inline double error_cdf_gaussian(double sigma, const SketchParams& params, double delta) {
    params.validate();
    if (!(sigma > 0.0) || !(delta >= 0.0)) {
        throw InvalidArgument("error_cdf_gaussian needs sigma > 0 and delta >= 0");
    }
    double rate = static_cast<double>(params.h) * params.np / params.m;
    double hits = -std::expm1(-rate * gaussian_difference_tail(sigma, delta));
    return 1.0 - std::pow(hits, static_cast<double>(params.h));
}

/// Smallest integer m for which the Gaussian closed form guarantees
/// P[error > delta] <= epsilon, i.e. m > -h np tail(delta) / log(1 - epsilon^(1/h)).
inline std::uint64_t min_sketch_rows(double sigma, double delta, double epsilon, std::uint32_t h, double np) {
    if (!(sigma > 0.0) || !(delta > 0.0) || !(epsilon > 0.0) || !(epsilon < 1.0) || h < 1 || !(np > 0.0)) {
        throw InvalidArgument("min_sketch_rows needs sigma > 0, delta > 0, 0 < epsilon < 1, h >= 1, np > 0");
    }
    double denom = std::log1p(-std::pow(epsilon, 1.0 / h));
    double bound = -static_cast<double>(h) * np * gaussian_difference_tail(sigma, delta) / denom;
    if (!std::isfinite(bound) || bound < 0.0) {
        return 1;
    }
    double m = std::floor(bound) + 1.0;
    if (m > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        throw NumericError("min_sketch_rows: bound exceeds the supported row count");
    }
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

namespace detail {

/// Upper limit for the outer error integral: the support width for bounded
/// distributions, otherwise the first delta with survival below 1e-9.
inline double error_horizon(const ValueDist& dist, const SketchParams& params) {
    if (dist.kind() != ValueDist::Kind::Gaussian) {
        return dist.upper() - dist.lower();
    }
    double step = dist.param1();
    double width = 2.0 * ValueDist::kGaussianTail * dist.param1();
    double delta = step;
    while (delta < width && overestimate_survival(dist, params, delta) >= 1e-9) {
        delta += step;
    }
    return std::min(delta, width);
}

/// Exact conditional first and second moments for a discrete distribution.
/// For delta between consecutive support gaps the survival is constant, so
/// both integrals are finite sums.
inline Moments discrete_moments(const ValueDist& dist, const SketchParams& params, double& second) {
    const auto& xs = dist.support();
    const auto& ps = dist.pmf();
    std::vector<double> tail(xs.size());
    double cum = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        cum += ps[j];
        tail[j] = all_rows_exceeded(std::max(0.0, 1.0 - cum), params);
    }
    double mean = 0.0;
    second = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double mk = 0.0;
        double sk = 0.0;
        for (std::size_t j = k; j + 1 < xs.size(); ++j) {
            double d0 = xs[j] - xs[k];
            double d1 = xs[j + 1] - xs[k];
            mk += (d1 - d0) * tail[j];
            sk += (d1 * d1 - d0 * d0) * tail[j];
        }
        mean += ps[k] * mk;
        second += ps[k] * sk;
    }
    return {mean, second - mean * mean};
}

}  // namespace detail

/// Mean and variance of the upper-sketch error given the coordinate is
/// active: E = integral of P[error > delta], E[error^2] = integral of
/// 2 delta P[error > delta], both over delta >= 0.
inline Moments error_moments(const ValueDist& dist, const SketchParams& params) {
    params.validate();
    if (dist.is_discrete()) {
        double second = 0.0;
        return detail::discrete_moments(dist, params, second);
    }
    double horizon = detail::error_horizon(dist, params);
    auto surv = [&](double d) { return overestimate_survival(dist, params, d); };
    double mean = integrate(surv, 0.0, horizon, kOuterTolerance);
    double second = integrate([&](double d) { return 2.0 * d * surv(d); }, 0.0, horizon, kOuterTolerance);
    return {mean, std::max(0.0, second - mean * mean)};
}

/// Expected upper-sketch error given the coordinate is active.
inline double expected_error(const ValueDist& dist, const SketchParams& params) {
    params.validate();
    if (dist.is_discrete()) {
        double second = 0.0;
        return detail::discrete_moments(dist, params, second).mean;
    }
    double horizon = detail::error_horizon(dist, params);
    return integrate([&](double d) { return overestimate_survival(dist, params, d); }, 0.0, horizon,
                     kOuterTolerance);
}

/// Moments of the lower-sketch error (decoded lower bound minus true value,
/// never positive): the negated upper-sketch error of the reflected values.
inline Moments lower_error_moments(const ValueDist& dist, const SketchParams& params) {
    Moments up = error_moments(dist.reflected(), params);
    return {-up.mean, up.variance};
}

}  // namespace sinnamon::analysis
