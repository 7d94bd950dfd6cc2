#pragma once

// Shared oracles for the test suites: adaptive quadrature and a ternary
// maximizer, both independent of the library internals they check.

#include <cmath>
#include <functional>

namespace testsupport {

namespace detail {

inline double adaptive_step(const std::function<double(double)>& f,
                            double a, double b, double fa, double fm,
                            double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double split = left + right;
    if (depth <= 0 || std::fabs(split - whole) < 15 * tol) {
        return split + (split - whole) / 15;
    }
    return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-11, int depth = 48) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return detail::adaptive_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Maximizer of a unimodal f over [lo, hi] by ternary search.
inline double maximize(const std::function<double(double)>& f, double lo,
                       double hi, int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const double a = lo + (hi - lo) / 3;
        const double b = hi - (hi - lo) / 3;
        if (f(a) < f(b)) {
            lo = a;
        } else {
            hi = b;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace testsupport
