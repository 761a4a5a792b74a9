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
#include <string>

#include "sinnamon/error.hpp"

namespace sinnamon::analysis {

inline constexpr double kInnerTolerance = 1e-6;
inline constexpr double kOuterTolerance = 1e-4;

namespace detail {

struct SimpsonState {
    int depth_limit;
    bool failed = false;
    double worst = 0.0;
};

template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth, SimpsonState& st) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double diff = left + right - whole;
    if (std::fabs(diff) <= 15.0 * tol) {
        return left + right + diff / 15.0;
    }
    if (depth >= st.depth_limit) {
        st.failed = true;
        st.worst += std::fabs(diff) / 15.0;
        return left + right + diff / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, st) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, st);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance `tol`.
/// Throws QuadratureError carrying the estimate when the recursion limit is
/// reached before the tolerance is met.
template <typename F>
double integrate(const F& f, double a, double b, double tol = kInnerTolerance, int depth_limit = 48) {
    if (!(a < b)) {
        return 0.0;
    }
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    detail::SimpsonState st{depth_limit};
    // First level is always split.
    double fl = f(0.5 * (a + m));
    double fr = f(0.5 * (m + b));
    double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    double result = detail::simpson_step(f, a, m, fa, fl, fm, left, 0.5 * tol, 1, st) +
                    detail::simpson_step(f, m, b, fm, fr, fb, right, 0.5 * tol, 1, st);
    if (st.failed || !std::isfinite(result)) {
        throw QuadratureError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]",
                              result, st.worst);
    }
    return result;
}

}  // namespace sinnamon::analysis
