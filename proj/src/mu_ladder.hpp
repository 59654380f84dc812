#pragma once

// Internal enumeration kernel. For one canonical pair (q2 > 0, or q2 == 0
// and q1 > 0) it walks every integer band |F(x) - p| < psi(q) along the
// monotone pieces of F on the domain, in one fixed order. Boundary roots are
// marched: predicted from the previous root through a cached inverse slope,
// then corrected by safeguarded Newton until either the step falls under an
// ulp or the global curvature bound certifies the remaining error below a
// quarter ulp. Part lengths therefore carry only a few ulp of absolute noise.

#include <cmath>
#include <cstdlib>
#include <limits>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"

namespace dualcurve {
namespace detail {

struct PairContext {
    long long q1 = 0, q2 = 0;
    long long q = 0;
    double psi_q = 0.0;
    bool theta1 = false;
    bool has_x0 = false; // q2 != 0
    double x0 = 0.0, fx0 = 0.0;
    long long p0 = 0;
    double norm = 0.0; // ||F(x0)||
    bool small_norm = false;
};

inline PairContext make_pair_context(const ExtendedCurve& ext, double psi_q,
                                     long long q1, long long q2) {
    PairContext c;
    c.q1 = q1;
    c.q2 = q2;
    c.q = std::max(std::llabs(q1), std::llabs(q2));
    c.psi_q = psi_q;
    double M = ext.constants().M;
    c.theta1 = static_cast<double>(std::llabs(q1)) > 2.0 * M * static_cast<double>(std::llabs(q2));
    if (q2 != 0) {
        c.has_x0 = true;
        c.x0 = ext.g(static_cast<double>(q1) / static_cast<double>(q2));
        c.fx0 = F_eval(ext, q1, q2, c.x0);
        c.p0 = static_cast<long long>(std::ceil(c.fx0 - 0.5));
        c.norm = std::abs(c.fx0 - static_cast<double>(c.p0));
        c.small_norm = c.norm < 2.0 * psi_q;
    }
    return c;
}

// One monotone run of G = sig * F, parameterized from its low-G end to its
// high-G end. Each band edge keeps a marching cursor.
struct Cursor {
    double x = 0.0;
    double gval = 0.0;  // G at the cursor (the previous target, exactly)
    double islope = 0.0; // cached 1/G' at the cursor; 0 = unknown
};

struct Piece {
    double x_glo = 0, x_ghi = 0;
    double g_lo = 0, g_hi = 0;
    bool rising_in_x = true; // G increasing with x
    double g2_at_lo = 0.0;   // |G''| at the low end, for the first prediction
    Cursor lo_edge, hi_edge;
};

// The ladder works on G(x) = sig * (q1 x + q2 fext(x)); sig makes G convex.
struct GEval {
    const ExtendedCurve* ext;
    double q1, q2, sig;

    double value(double x) const {
        return sig * (q1 * x + q2 * ext->fext(x));
    }
    void pair(double x, double& v, double& d) const {
        double f, f1;
        ext->fext_pair(x, f, f1);
        v = sig * (q1 * x + q2 * f);
        d = sig * (q1 + q2 * f1);
    }
};

// Root of G = t on the piece, marching the cursor toward the high end.
// `kappa2` is a global bound on |G''|; with it, a Newton step of size h
// leaves at most kappa2 h^2 / (2|G'|) of error, which certifies convergence
// without a confirming evaluation.
inline double march_root(const GEval& G, Piece& pc, Cursor& cu, double t, double kappa2) {
    if (t <= pc.g_lo) return pc.x_glo;
    if (t >= pc.g_hi) return pc.x_ghi;

    const double eps = std::numeric_limits<double>::epsilon();
    double blo = std::min(cu.x, pc.x_ghi);
    double bhi = std::max(cu.x, pc.x_ghi);
    const bool rising = pc.rising_in_x;

    double x;
    if (cu.islope != 0.0) {
        x = cu.x + (t - cu.gval) * cu.islope;
    } else if (kappa2 > 0.0 && pc.g2_at_lo > 0.0) {
        // first root on this piece: the curvature gives the distance scale
        double d = std::sqrt(2.0 * (t - pc.g_lo) / pc.g2_at_lo);
        x = pc.x_glo + (pc.x_ghi > pc.x_glo ? d : -d);
    } else {
        x = blo + 0.5 * (bhi - blo);
    }
    if (!(blo <= x && x <= bhi)) x = blo + 0.5 * (bhi - blo);

    double dv = 0.0;
    for (int iter = 0; iter < 60; ++iter) {
        double fv;
        G.pair(x, fv, dv);
        fv -= t;
        if (fv == 0.0) break;
        if ((fv > 0.0) == rising)
            bhi = x;
        else
            blo = x;
        if (bhi - blo <= eps * (std::abs(blo) + std::abs(bhi))) break;
        bool newton = dv != 0.0;
        double step = newton ? -fv / dv : 0.0;
        // a sub-ulp Newton correction means x already sits on the root
        if (newton && std::abs(step) <= eps * std::abs(x)) break;
        double xn = x + step;
        if (!newton || !(blo < xn && xn < bhi)) {
            xn = blo + 0.5 * (bhi - blo);
            step = xn - x;
            newton = false;
        }
        x = xn;
        // Newton leaves at most kappa2 step^2 / (2|G'|) of error; bisection
        // steps carry no such certificate
        if (newton && kappa2 * step * step <= 0.5 * eps * std::abs(x) * std::abs(dv)) break;
    }
    cu.x = x;
    cu.gval = t;
    cu.islope = dv != 0.0 ? 1.0 / dv : 0.0;
    return x;
}

// Sink: void(long long p, int nparts, const Interval* parts, double len).
// Parts are ordered left to right; when a band covers the critical value the
// two pieces fuse into a single part.
template <class Sink>
void ladder_pair(const ExtendedCurve& ext, const PairContext& ctx, Sink&& sink) {
    const double a = ext.domain().lo, b = ext.domain().hi;
    const double psi_q = ctx.psi_q;
    const double sig = (ctx.q2 == 0) ? 1.0 : static_cast<double>(ext.base().sign);
    const GEval G{&ext, static_cast<double>(ctx.q1), static_cast<double>(ctx.q2), sig};
    const double kappa2 = std::abs(G.q2) * ext.base().c2;

    Piece pieces[2];
    int npieces = 0;
    double ga = G.value(a), gb = G.value(b);
    if (ctx.has_x0 && a < ctx.x0 && ctx.x0 < b) {
        double g0 = G.value(ctx.x0);
        double g2 = std::abs(G.q2) * std::abs(ext.f2ext(ctx.x0));
        pieces[0] = {ctx.x0, a, g0, ga, false, g2, {ctx.x0, g0, 0.0}, {ctx.x0, g0, 0.0}};
        pieces[1] = {ctx.x0, b, g0, gb, true, g2, {ctx.x0, g0, 0.0}, {ctx.x0, g0, 0.0}};
        npieces = 2;
    } else {
        if (ga < gb)
            pieces[0] = {a, b, ga, gb, true, std::abs(G.q2) * std::abs(ext.f2ext(a)),
                         {a, ga, 0.0}, {a, ga, 0.0}};
        else
            pieces[0] = {b, a, gb, ga, false, std::abs(G.q2) * std::abs(ext.f2ext(b)),
                         {b, gb, 0.0}, {b, gb, 0.0}};
        npieces = 1;
    }

    double gmin = pieces[0].g_lo, gmax = pieces[0].g_hi;
    for (int i = 1; i < npieces; ++i) {
        gmin = std::min(gmin, pieces[i].g_lo);
        gmax = std::max(gmax, pieces[i].g_hi);
    }
    long long pg_lo = static_cast<long long>(std::ceil(gmin - psi_q));
    long long pg_hi = static_cast<long long>(std::floor(gmax + psi_q));

    Interval parts[2];
    for (long long pg = pg_lo; pg <= pg_hi; ++pg) {
        double t_lo = static_cast<double>(pg) - psi_q;
        double t_hi = static_cast<double>(pg) + psi_q;
        int nparts = 0;
        for (int i = 0; i < npieces; ++i) {
            Piece& pc = pieces[i];
            if (!(t_hi > pc.g_lo && t_lo < pc.g_hi && pc.g_lo < pc.g_hi)) continue;
            double xl = march_root(G, pc, pc.lo_edge, t_lo, kappa2);
            double xh = march_root(G, pc, pc.hi_edge, t_hi, kappa2);
            Interval part = pc.rising_in_x ? Interval(xl, xh) : Interval(xh, xl);
            if (part.hi < part.lo) continue; // degenerate by rounding
            parts[nparts++] = part;
        }
        if (nparts == 0) continue;
        if (nparts == 2) {
            // pieces[0] sits left of x0, pieces[1] right; order and fuse
            if (parts[0].lo > parts[1].lo) std::swap(parts[0], parts[1]);
            if (parts[0].hi == parts[1].lo) {
                parts[0].hi = parts[1].hi;
                nparts = 1;
            }
        }
        double len = 0.0;
        for (int i = 0; i < nparts; ++i) len += parts[i].length();
        sink(static_cast<long long>(sig) * pg, nparts, parts, len);
    }
}

// Canonical pair walk for one height q: exactly one of each mirror pair
// {(q1,q2), (-q1,-q2)} is visited (the one with q2 > 0, or q1 > 0 when
// q2 = 0); mirrors produce identical mu sets. 4q pairs per height.
template <class PairFn>
void for_each_canonical_pair(long long q, PairFn&& fn) {
    for (long long q1 = -q; q1 <= q; ++q1) fn(q1, q);
    fn(q, 0LL);
    for (long long q2 = 1; q2 < q; ++q2) {
        fn(-q, q2);
        fn(q, q2);
    }
}

// Number of candidate items (pairs and p values) a ladder pass over height q
// may touch; used for budget pre-estimates.
inline double ladder_items_estimate(long long q, double C) {
    double qd = static_cast<double>(q);
    return 4.0 * qd * (2.0 * C * qd + 4.0) + 4.0 * qd;
}

} // namespace detail
} // namespace dualcurve
