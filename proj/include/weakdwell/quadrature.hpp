// quadrature.hpp — Adaptive Simpson integration on [a, b]

#pragma once

#include <cmath>
#include <utility>

#include "weakdwell/errors.hpp"

namespace weakdwell {

namespace detail {

inline double simpson(double h, double fa, double fm, double fb) {
    return (fa + 4.0 * fm + fb) * (h / 6.0);
}

template <typename F>
double simpson_adapt(F& f, double a, double m, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth, int max_depth) {
    if (depth >= max_depth)
        throw QuadratureNonConvergence("adaptive_simpson: max refinement depth reached");
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol) return left + right + err;
    return simpson_adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           simpson_adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Integrates f over [a, b] to absolute tolerance abs_tol. The integrand is
// assumed smooth; throws QuadratureNonConvergence once max_depth is hit.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 40) {
    if (!(b > a)) throw DomainError("adaptive_simpson: requires b > a");
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = detail::simpson(b - a, fa, fm, fb);
    return detail::simpson_adapt(f, a, m, b, fa, fm, fb, whole, abs_tol, 0, max_depth);
}

}  // namespace weakdwell
