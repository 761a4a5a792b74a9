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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sinnamon/analysis/inner_product_error.hpp"
#include "sinnamon/analysis/profile.hpp"
#include "sinnamon/analysis/quadrature.hpp"
#include "sinnamon/analysis/simulation.hpp"
#include "sinnamon/analysis/sketch_error.hpp"
#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/collection.hpp"
#include "test_util.hpp"

namespace sinnamon::analysis {
namespace {

TEST(Quadrature, KnownIntegrals) {
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-6);
    EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0), std::sqrt(std::numbers::pi), 1e-6);
    EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0), 0.0);
}

TEST(Quadrature, UnreachableToleranceCarriesEstimate) {
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, 1e-12, 3);
        FAIL();
    } catch (const QuadratureError& e) {
        EXPECT_TRUE(std::isfinite(e.estimate()));
        EXPECT_GT(e.achieved_tolerance(), 0.0);
    }
}

TEST(ValueDistParse, AcceptsKnownForms) {
    auto g = ValueDist::parse("gaussian:0,0.1");
    EXPECT_EQ(g.kind(), ValueDist::Kind::Gaussian);
    EXPECT_NEAR(g.cdf(0.0), 0.5, 1e-12);
    auto u = ValueDist::parse("uniform:-1,1");
    EXPECT_EQ(u.kind(), ValueDist::Kind::Uniform);
    EXPECT_NEAR(u.cdf(0.5), 0.75, 1e-12);
    for (const char* bad : {"gaussian", "gaussian:1", "gaussian:0,-1", "uniform:1,0", "zeta:1,2", "gaussian:a,b"}) {
        EXPECT_THROW(ValueDist::parse(bad), InvalidArgument) << bad;
    }
}

TEST(ProbOverestimate, UniformSingleMappingClosedForm) {
    for (double m : {10.0, 60.0, 240.0}) {
        for (double np : {5.0, 120.0}) {
            double beta = np / m;
            double want = 1.0 - (1.0 - std::exp(-beta)) / beta;
            EXPECT_NEAR(prob_overestimate(ValueDist::uniform(0, 1), {m, 1, np}), want, 1e-6) << m << " " << np;
        }
    }
}

TEST(ProbOverestimate, GaussianClosedFormMatchesQuadrature) {
    for (double m : {30.0, 120.0, 480.0}) {
        for (std::uint32_t h : {1U, 2U, 3U}) {
            SketchParams p{m, h, 120};
            EXPECT_NEAR(prob_overestimate_gaussian(p), prob_overestimate(ValueDist::gaussian(0, 1), p), 1e-3);
        }
        double beta = 120.0 / m;
        EXPECT_NEAR(prob_overestimate_gaussian({m, 1, 120}), 1.0 - (1.0 - std::exp(-beta)) / beta, 1e-12);
    }
}

TEST(ProbOverestimate, VanishesAsRowsGrow) {
    double last = 1.0;
    for (double m : {1e2, 1e4, 1e6, 1e8}) {
        double p = prob_overestimate(ValueDist::gaussian(0, 1), {m, 2, 50});
        EXPECT_LT(p, last);
        last = p;
    }
    EXPECT_LT(last, 1e-5);
    EXPECT_LT(expected_error(ValueDist::gaussian(0, 1), {1e8, 1, 50}), 1e-5);
}

TEST(ErrorCdf, ConsistentWithProbabilityAndMonotone) {
    auto dist = ValueDist::gaussian(0, 0.1);
    SketchParams p{60, 2, 120};
    EXPECT_NEAR(error_cdf(dist, p, 0.0) + prob_overestimate(dist, p), 1.0, 1e-12);
    double last = 0.0;
    for (double d = 0.0; d <= 1.0; d += 0.05) {
        double c = error_cdf(dist, p, d);
        EXPECT_GE(c, last - 1e-12);
        last = c;
    }
    auto u = ValueDist::uniform(-1, 1);
    EXPECT_NEAR(error_cdf(u, p, 2.0), 1.0, 1e-12);
    EXPECT_NEAR(error_cdf(u, p, 5.0), 1.0, 1e-12);
    EXPECT_THROW(error_cdf(u, p, -0.1), InvalidArgument);
}

TEST(ErrorCdf, AgreesWithSimulation) {
    auto dist = ValueDist::gaussian(0, 0.1);
    SketchParams p{60, 1, 120};
    auto sim = simulate_sketch_error(dist, p, {40000, 2, 5});
    for (double d : {0.05, 0.1, 0.2}) {
        EXPECT_NEAR(error_cdf(dist, p, d), sim.cdf(d), 0.02) << d;
    }
    EXPECT_NEAR(prob_overestimate(dist, p), sim.prob_positive(), 0.02);
}

TEST(ExpectedError, ReferenceCells) {
    EXPECT_NEAR(expected_error(ValueDist::uniform(-1, 1), {60, 1, 120}), 0.43, 0.02);
    EXPECT_NEAR(expected_error(ValueDist::uniform(-1, 1), {120, 1, 120}), 0.26, 0.02);
    auto uniform = ValueDist::uniform(-1, 1);
    SketchParams p{120, 2, 120};
    EXPECT_NEAR(expected_error(uniform, p), simulate_sketch_error(uniform, p, {40000, 2, 6}).mean(), 0.02);
    auto narrow = ValueDist::gaussian(0, 0.1);
    SketchParams q{240, 2, 120};
    EXPECT_NEAR(expected_error(narrow, q), simulate_sketch_error(narrow, q, {40000, 2, 6}).mean(), 0.002);
}

TEST(ExpectedError, DiscreteDistributionMatchesSimulation) {
    auto dist = ValueDist::discrete({1.0, 2.0, 3.0}, {0.5, 0.3, 0.2});
    SketchParams p{40, 1, 30};
    auto sim = simulate_sketch_error(dist, p, {40000, 2, 7});
    EXPECT_NEAR(expected_error(dist, p), sim.mean(), 0.02);
    EXPECT_NEAR(prob_overestimate(dist, p), sim.prob_positive(), 0.02);
}

TEST(MinSketchRows, SatisfiesBoundAndIsMinimal) {
    const double sigma = 0.1;
    const double delta = 0.2;
    const double eps = 0.1;
    const double np = 120;
    for (std::uint32_t h = 1; h <= 4; ++h) {
        auto m = min_sketch_rows(sigma, delta, eps, h, np);
        auto fail_prob = [&](double rows) { return 1.0 - error_cdf_gaussian(sigma, {rows, h, np}, delta); };
        EXPECT_LE(fail_prob(static_cast<double>(m)), eps + 1e-12) << h;
        if (m > 1) {
            EXPECT_GT(fail_prob(static_cast<double>(m - 1)), eps - 1e-9) << h;
        }
    }
}

TEST(MinSketchRows, UShapeOverMappings) {
    std::vector<std::uint64_t> ms;
    for (std::uint32_t h = 1; h <= 8; ++h) {
        ms.push_back(min_sketch_rows(0.1, 0.2, 0.1, h, 120));
    }
    auto lowest = std::min_element(ms.begin(), ms.end()) - ms.begin();
    for (std::ptrdiff_t i = 0; i + 1 <= lowest; ++i) {
        EXPECT_GE(ms[static_cast<std::size_t>(i)], ms[static_cast<std::size_t>(i + 1)]);
    }
    for (std::size_t i = static_cast<std::size_t>(lowest); i + 1 < ms.size(); ++i) {
        EXPECT_LE(ms[i], ms[i + 1]);
    }
    EXPECT_GT(lowest, 0);
    EXPECT_LT(lowest, 7);
}

TEST(MinSketchRows, DegenerateInputs) {
    EXPECT_EQ(min_sketch_rows(0.1, 0.2, 1.0 - 1e-15, 1, 120), 1U);
    EXPECT_THROW(min_sketch_rows(0.1, 0.2, 0.0, 1, 120), InvalidArgument);
    EXPECT_THROW(min_sketch_rows(0.0, 0.2, 0.1, 1, 120), InvalidArgument);
    EXPECT_THROW(min_sketch_rows(0.1, 0.2, 0.1, 0, 120), InvalidArgument);
}

TEST(ZiMoments, Examples) {
    auto a = zi_moments(1.0, 3.0, 2.0);
    EXPECT_DOUBLE_EQ(a.mean, 3.0);
    EXPECT_DOUBLE_EQ(a.variance, 4.0);
    auto b = zi_moments(0.0, 3.0, 2.0);
    EXPECT_DOUBLE_EQ(b.mean, 0.0);
    EXPECT_DOUBLE_EQ(b.variance, 0.0);
    auto c = zi_moments(0.5, 2.0, 0.0);
    EXPECT_DOUBLE_EQ(c.mean, 1.0);
    EXPECT_DOUBLE_EQ(c.variance, 1.0);
    EXPECT_THROW(zi_moments(1.5, 0, 1), InvalidArgument);
}

TEST(ZStatistic, CentersAndRejectsZeroVariance) {
    CoordErrorStats s{1.0, {0.5, 0.04}, {-0.5, 0.04}};
    SparseVector q{0, {1, 2}, {2.0F, -1.0F}};
    std::vector<CoordErrorStats> stats(2, s);
    double shift = 2.0 * 0.5 + (-1.0) * (-0.5);
    EXPECT_DOUBLE_EQ(z_statistic(q, shift, stats), 0.0);
    EXPECT_NEAR(z_statistic(q, shift + std::sqrt(5 * 0.04), stats), 1.0, 1e-12);
    std::vector<CoordErrorStats> flat(2, CoordErrorStats{1.0, {0.5, 0.0}, {-0.5, 0.0}});
    EXPECT_THROW(z_statistic(q, 0.0, flat), NumericError);
    EXPECT_THROW(z_statistic(q, 0.0, std::span(stats).first(1)), InvalidArgument);
}

TEST(Simulation, DeterministicForSeedAndWorkers) {
    auto dist = ValueDist::gaussian(0, 1);
    SketchParams p{30, 2, 40};
    auto a = simulate_sketch_error(dist, p, {5000, 3, 11});
    auto b = simulate_sketch_error(dist, p, {5000, 3, 11});
    EXPECT_EQ(a.sorted(), b.sorted());
    EXPECT_EQ(a.size(), 5000U);
    auto c = simulate_sketch_error(dist, p, {5000, 3, 12});
    EXPECT_NE(a.sorted(), c.sorted());
    auto z1 = simulate_z(ValueDist::gaussian(0, 0.1), {60, 1, 40}, 8, {2000, 2, 3});
    auto z2 = simulate_z(ValueDist::gaussian(0, 0.1), {60, 1, 40}, 8, {2000, 2, 3});
    EXPECT_EQ(z1.sorted(), z2.sorted());
}

TEST(ErrorSamples, Summaries) {
    ErrorSamples s({0.0, 0.0, 1.0, 3.0, -2.0});
    EXPECT_DOUBLE_EQ(s.cdf(0.0), 0.6);
    EXPECT_DOUBLE_EQ(s.prob_positive(), 0.4);
    EXPECT_DOUBLE_EQ(s.prob_negative(), 0.2);
    EXPECT_DOUBLE_EQ(s.mean(), 0.4);
}

TEST(Profile, SingleCoordinateDocumentsHaveNoError) {
    Collection<SinnamonIndex> col{SinnamonIndex(EngineConfig{500, 7, 2, 1, false})};
    std::mt19937_64 rng(1);
    std::normal_distribution<float> g(0.0F, 1.0F);
    for (ExternalId id = 0; id < 400; ++id) {
        float v = 0.0F;
        while (v == 0.0F) {
            v = g(rng);
        }
        col.insert({id, {static_cast<Coord>(rng() % 500)}, {v}});
    }
    auto queries = testing::gaussian_set(5, 500, 50, 2, 100000);
    auto prof = empirical_error_profile(col.engine(), col.store(), queries);
    EXPECT_EQ(prof.upper.size(), 400U);
    EXPECT_EQ(prof.lower.size(), 400U);
    for (const auto* s : {&prof.upper, &prof.lower}) {
        for (double e : s->sorted()) {
            EXPECT_EQ(e, 0.0);
        }
    }
    ASSERT_FALSE(prof.inner_product.empty());
    EXPECT_GE(prof.inner_product.sorted().front(), 0.0);
    EXPECT_LT(prof.inner_product.sorted().back(), 0.2);
    EXPECT_DOUBLE_EQ(prof.mean_nnz, 1.0);
}

TEST(Profile, MatchesFormulaOnGeneratedData) {
    const std::uint32_t dims = 2000;
    const double psi = 60;
    Collection<SinnamonIndex> col{SinnamonIndex(EngineConfig{dims, 50, 1, 3, false})};
    for (const auto& d : testing::gaussian_set(3000, dims, psi, 8)) {
        col.insert(d);
    }
    auto prof = empirical_error_profile(col.engine(), col.store());
    SketchParams p{50, 1, prof.mean_nnz};
    auto dist = ValueDist::gaussian(0, 1);
    for (double d : {0.0, 0.25, 0.5, 1.0}) {
        EXPECT_NEAR(prof.upper.cdf(d), error_cdf(dist, p, d), 0.03) << d;
    }
    EXPECT_NEAR(prof.upper.mean(), expected_error(dist, p), 0.03);
    for (double e : prof.upper.sorted()) {
        ASSERT_GE(e, 0.0);
    }
    for (double e : prof.lower.sorted()) {
        ASSERT_LE(e, 0.0);
    }
}

}  // namespace
}  // namespace sinnamon::analysis
