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
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sinnamon/error.hpp"

namespace sinnamon::analysis {

/// Distribution of the values of active coordinates: uniform over [a, b],
/// Gaussian(mu, sigma), or a finite discrete pmf.
class ValueDist {
  public:
    enum class Kind { Uniform, Gaussian, Discrete };

    /// Gaussian quadrature and search ranges stop this many deviations out.
    static constexpr double kGaussianTail = 8.0;

    static ValueDist uniform(double a, double b) {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
            throw InvalidArgument("uniform distribution needs finite a < b");
        }
        ValueDist d(Kind::Uniform);
        d.p0_ = a;
        d.p1_ = b;
        return d;
    }

    static ValueDist gaussian(double mean, double stddev) {
        if (!(stddev > 0.0) || !std::isfinite(mean) || !std::isfinite(stddev)) {
            throw InvalidArgument("gaussian distribution needs finite mean and stddev > 0");
        }
        ValueDist d(Kind::Gaussian);
        d.p0_ = mean;
        d.p1_ = stddev;
        return d;
    }

    /// `support` need not be sorted; `pmf` must be non-negative and sum to 1.
    static ValueDist discrete(std::vector<double> support, std::vector<double> pmf) {
        if (support.empty() || support.size() != pmf.size()) {
            throw InvalidArgument("discrete distribution needs matching non-empty support and pmf");
        }
        std::vector<std::size_t> order(support.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
        ValueDist d(Kind::Discrete);
        double total = 0.0;
        for (std::size_t i : order) {
            if (!(pmf[i] >= 0.0) || !std::isfinite(support[i])) {
                throw InvalidArgument("discrete distribution needs finite support and non-negative pmf");
            }
            if (!d.support_.empty() && support[i] == d.support_.back()) {
                throw InvalidArgument("discrete distribution support has duplicates");
            }
            d.support_.push_back(support[i]);
            d.pmf_.push_back(pmf[i]);
            total += pmf[i];
        }
        if (std::fabs(total - 1.0) > 1e-12) {
            throw InvalidArgument("discrete pmf must sum to 1");
        }
        d.cum_.resize(d.pmf_.size());
        std::partial_sum(d.pmf_.begin(), d.pmf_.end(), d.cum_.begin());
        return d;
    }

    /// Parses `gaussian:<mean>,<stddev>` or `uniform:<a>,<b>`.
    static ValueDist parse(std::string_view text) {
        auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            throw InvalidArgument("distribution must look like gaussian:mu,sigma or uniform:a,b");
        }
        auto name = text.substr(0, colon);
        auto args = text.substr(colon + 1);
        auto comma = args.find(',');
        if (comma == std::string_view::npos) {
            throw InvalidArgument("distribution needs two comma-separated parameters");
        }
        double x = parse_number(args.substr(0, comma));
        double y = parse_number(args.substr(comma + 1));
        if (name == "gaussian") {
            return gaussian(x, y);
        }
        if (name == "uniform") {
            return uniform(x, y);
        }
        throw InvalidArgument("unknown distribution '" + std::string(name) + "'");
    }

    Kind kind() const noexcept { return kind_; }
    bool is_discrete() const noexcept { return kind_ == Kind::Discrete; }

    /// Parameters: (a, b) for uniform, (mean, stddev) for Gaussian.
    double param0() const noexcept { return p0_; }
    double param1() const noexcept { return p1_; }
    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& pmf() const noexcept { return pmf_; }

    double pdf(double x) const {
        switch (kind_) {
            case Kind::Uniform: return (x >= p0_ && x <= p1_) ? 1.0 / (p1_ - p0_) : 0.0;
            case Kind::Gaussian: {
                double z = (x - p0_) / p1_;
                return std::exp(-0.5 * z * z) / (p1_ * std::sqrt(2.0 * std::numbers::pi));
            }
            case Kind::Discrete: {
                auto it = std::lower_bound(support_.begin(), support_.end(), x);
                return (it != support_.end() && *it == x) ? pmf_[static_cast<std::size_t>(it - support_.begin())]
                                                          : 0.0;
            }
        }
        return 0.0;
    }

    double cdf(double x) const { return 1.0 - survival(x); }

    /// P[X > x], computed directly to keep precision in the upper tail.
    double survival(double x) const {
        switch (kind_) {
            case Kind::Uniform:
                if (x <= p0_) {
                    return 1.0;
                }
                if (x >= p1_) {
                    return 0.0;
                }
                return (p1_ - x) / (p1_ - p0_);
            case Kind::Gaussian: return 0.5 * std::erfc((x - p0_) / (p1_ * std::numbers::sqrt2));
            case Kind::Discrete: {
                auto it = std::upper_bound(support_.begin(), support_.end(), x);
                if (it == support_.begin()) {
                    return 1.0;
                }
                return std::max(0.0, 1.0 - cum_[static_cast<std::size_t>(it - support_.begin()) - 1]);
            }
        }
        return 0.0;
    }

    /// Interval holding all (or, for Gaussians, all but 8 sigma of) the mass.
    double lower() const noexcept {
        switch (kind_) {
            case Kind::Uniform: return p0_;
            case Kind::Gaussian: return p0_ - kGaussianTail * p1_;
            case Kind::Discrete: return support_.front();
        }
        return 0.0;
    }
    double upper() const noexcept {
        switch (kind_) {
            case Kind::Uniform: return p1_;
            case Kind::Gaussian: return p0_ + kGaussianTail * p1_;
            case Kind::Discrete: return support_.back();
        }
        return 0.0;
    }

    double mean() const {
        switch (kind_) {
            case Kind::Uniform: return 0.5 * (p0_ + p1_);
            case Kind::Gaussian: return p0_;
            case Kind::Discrete: return std::inner_product(support_.begin(), support_.end(), pmf_.begin(), 0.0);
        }
        return 0.0;
    }

    double variance() const {
        switch (kind_) {
            case Kind::Uniform: return (p1_ - p0_) * (p1_ - p0_) / 12.0;
            case Kind::Gaussian: return p1_ * p1_;
            case Kind::Discrete: {
                double mu = mean();
                double v = 0.0;
                for (std::size_t i = 0; i < support_.size(); ++i) {
                    v += pmf_[i] * (support_[i] - mu) * (support_[i] - mu);
                }
                return v;
            }
        }
        return 0.0;
    }

    /// The distribution of -X.
    ValueDist reflected() const {
        switch (kind_) {
            case Kind::Uniform: return uniform(-p1_, -p0_);
            case Kind::Gaussian: return gaussian(-p0_, p1_);
            case Kind::Discrete: {
                std::vector<double> s(support_.size());
                std::transform(support_.begin(), support_.end(), s.begin(), [](double v) { return -v; });
                return discrete(std::move(s), pmf_);
            }
        }
        return *this;
    }

    template <typename Rng>
    double sample(Rng& rng) const {
        switch (kind_) {
            case Kind::Uniform: return std::uniform_real_distribution<double>(p0_, p1_)(rng);
            case Kind::Gaussian: return std::normal_distribution<double>(p0_, p1_)(rng);
            case Kind::Discrete: {
                double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
                if (it == cum_.end()) {
                    --it;
                }
                return support_[static_cast<std::size_t>(it - cum_.begin())];
            }
        }
        return 0.0;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::Uniform: return "uniform:" + fmt(p0_) + "," + fmt(p1_);
            case Kind::Gaussian: return "gaussian:" + fmt(p0_) + "," + fmt(p1_);
            case Kind::Discrete: return "discrete:" + std::to_string(support_.size());
        }
        return "";
    }

  private:
    explicit ValueDist(Kind kind) : kind_(kind) {}

    static double parse_number(std::string_view s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw InvalidArgument("bad number '" + std::string(s) + "' in distribution");
        }
        return v;
    }

    static std::string fmt(double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, ptr);
    }

    Kind kind_;
    double p0_ = 0.0;
    double p1_ = 0.0;
    std::vector<double> support_;
    std::vector<double> pmf_;
    std::vector<double> cum_;
};

}  // namespace sinnamon::analysis
