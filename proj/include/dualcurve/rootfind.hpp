#pragma once

#include <cmath>
#include <limits>

#include "dualcurve/errors.hpp"

namespace dualcurve {

// Root of a strictly monotone function on a bracketing interval: bisection
// with one Newton refinement per iteration, run until the bracket collapses
// to machine precision. The residual contract |f(x)| <= 1e-12-relative that
// callers rely on is met with a wide margin; stopping earlier would leave
// endpoint noise that downstream length measurements can see.
//
// Requires flo = f(lo), fhi = f(hi) with flo * fhi <= 0.
template <class F, class DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi, double flo, double fhi) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw internal_error("solve_bracketed: endpoints do not bracket a root");

    const double eps = std::numeric_limits<double>::epsilon();
    double x = lo + 0.5 * (hi - lo);
    for (int iter = 0; iter < 200; ++iter) {
        if (!(lo < x && x < hi)) x = lo + 0.5 * (hi - lo);
        if (x <= lo || x >= hi) break; // bracket collapsed to adjacent doubles
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= eps * (std::abs(lo) + std::abs(hi))) break;
        double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : lo + 0.5 * (hi - lo);
        x = (lo < xn && xn < hi) ? xn : lo + 0.5 * (hi - lo);
    }
    return lo + 0.5 * (hi - lo);
}

// Newton iteration polished to machine precision, safeguarded by a known
// bracket [lo, hi] (monotone f straddling zero; `rising` tells which way).
// `x0` is a warm start inside [lo, hi]. Falls back to bisection whenever a
// Newton step leaves the bracket.
template <class F, class DF>
double polish_root(F&& f, DF&& df, double x0, double lo, double hi, bool rising) {
    const double eps = std::numeric_limits<double>::epsilon();
    double x = x0;
    if (x < lo) x = lo;
    if (x > hi) x = hi;
    for (int iter = 0; iter < 60; ++iter) {
        double fx = f(x);
        if (fx == 0.0) return x;
        bool high = (fx > 0.0) == rising;
        if (high)
            hi = x;
        else
            lo = x;
        if (hi - lo <= eps * (std::abs(lo) + std::abs(hi))) break;
        double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : lo + 0.5 * (hi - lo);
        if (!(lo < xn && xn < hi)) xn = lo + 0.5 * (hi - lo);
        // a sub-ulp Newton step means the root is resolved; the far bracket
        // end need not have collapsed
        if (std::abs(xn - x) <= eps * std::abs(x)) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

} // namespace dualcurve
