#include "dualcurve/approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "dualcurve/errors.hpp"
#include "dualcurve/util.hpp"
#include "mu_ladder.hpp"

namespace dualcurve {

const char* triple_case_name(TripleCase c) {
    switch (c) {
    case TripleCase::theta1: return "theta1";
    case TripleCase::theta2_p_not_p0: return "theta2_p_not_p0";
    case TripleCase::theta2_p0_small: return "theta2_p0_small";
    case TripleCase::theta2_p0_large: return "theta2_p0_large";
    }
    return "?";
}

double nearest_int_norm(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("nearest_int_norm requires finite input");
    return std::abs(x - std::round(x));
}

Theta classify(long long q1, long long q2, const CurveConstants& consts) {
    if (q1 == 0 && q2 == 0) throw std::invalid_argument("classify requires (q1, q2) != (0, 0)");
    double a1 = static_cast<double>(std::llabs(q1));
    double a2 = static_cast<double>(std::llabs(q2));
    return a1 > 2.0 * consts.M * a2 ? Theta::theta1 : Theta::theta2;
}

long long p_zero(const ExtendedCurve& ext, long long q1, long long q2) {
    if (q2 == 0) throw std::invalid_argument("p_zero requires q2 != 0");
    double fx0 = F_eval(ext, q1, q2, critical_point(ext, q1, q2));
    return static_cast<long long>(std::ceil(fx0 - 0.5));
}

DualTriple make_triple(const ExtendedCurve& ext, const ApproxFunction& psi,
                       long long q1, long long q2, long long p) {
    if (q1 == 0 && q2 == 0) throw std::invalid_argument("triple requires (q1, q2) != (0, 0)");
    DualTriple t;
    t.q1 = q1;
    t.q2 = q2;
    t.p = p;
    t.q = std::max(std::llabs(q1), std::llabs(q2));
    if (classify(q1, q2, ext.constants()) == Theta::theta1) {
        t.kase = TripleCase::theta1;
        return t;
    }
    t.x0 = critical_point(ext, q1, q2);
    t.fx0 = F_eval(ext, q1, q2, t.x0);
    t.p0 = static_cast<long long>(std::ceil(t.fx0 - 0.5));
    t.norm_fx0 = std::abs(t.fx0 - static_cast<double>(t.p0));
    double psi_q = psi(t.q);
    if (p != t.p0)
        t.kase = TripleCase::theta2_p_not_p0;
    else
        t.kase = t.norm_fx0 < 2.0 * psi_q ? TripleCase::theta2_p0_small
                                          : TripleCase::theta2_p0_large;
    return t;
}

IntervalSet solve_mu(const ExtendedCurve& ext, const ApproxFunction& psi,
                     long long q1, long long q2, long long p) {
    if (q1 == 0 && q2 == 0) throw std::invalid_argument("solve_mu requires (q1, q2) != (0, 0)");
    // Mirror triples have identical solution sets; solving the canonical
    // representative makes the equality exact, not just up to rounding.
    if (q2 < 0 || (q2 == 0 && q1 < 0)) {
        q1 = -q1;
        q2 = -q2;
        p = -p;
    }
    long long q = std::max(std::llabs(q1), std::llabs(q2));
    IntervalSet out;
    auto ctx = detail::make_pair_context(ext, psi(q), q1, q2);
    detail::ladder_pair(ext, ctx, [&](long long pv, int nparts, const Interval* parts, double len) {
        if (pv != p) return;
        out.parts.assign(parts, parts + nparts);
        out.total_length = len;
    });
    return out;
}

namespace {

// Explicit envelope constants. The curvature band gives
// |F'(x)| in sqrt(|q2| |F(x)-F(x0)|) * [sqrt(2 c1^2/c2), sqrt(2 c2^2/c1)],
// each band crossing is one interval per monotone piece (two pieces total),
// and a band of half-width eta on a piece with |F'| >= d has length at most
// 2 eta / d.
struct EnvelopeParams {
    double c1, c2, M;
    long long q0; // heights below q0 cannot use the p != p0 branch
};

double envelope(const EnvelopeParams& ep, TripleCase kase, double psi_q,
                long long q1, long long q2, long long dp, double norm) {
    double a2 = static_cast<double>(std::llabs(q2));
    switch (kase) {
    case TripleCase::theta1: {
        double d1 = static_cast<double>(std::llabs(q1)) - (ep.M - 1.0) * a2;
        return 2.0 * psi_q / d1;
    }
    case TripleCase::theta2_p_not_p0:
        return std::sqrt(24.0 * ep.c2 / (ep.c1 * ep.c1 * a2 * static_cast<double>(dp))) * psi_q;
    case TripleCase::theta2_p0_small:
        return std::sqrt(24.0 * psi_q / (ep.c1 * a2));
    case TripleCase::theta2_p0_large:
        return std::sqrt(16.0 * ep.c2 / (ep.c1 * ep.c1 * a2 * norm)) * psi_q;
    }
    return 0.0;
}

} // namespace

double theoretical_bound(const DualTriple& triple, const ApproxFunction& psi,
                         const ExtendedCurve& ext) {
    EnvelopeParams ep{ext.base().c1, ext.base().c2, ext.constants().M, 0};
    double psi_q = psi(triple.q);
    if (triple.kase == TripleCase::theta2_p_not_p0 && triple.q < psi.q0())
        throw std::invalid_argument("theoretical_bound: p != p0 envelope needs q >= q0");
    long long dp = std::llabs(triple.p - triple.p0);
    return envelope(ep, triple.kase, psi_q, triple.q1, triple.q2, dp, triple.norm_fx0);
}

void enumerate_nonempty(const ExtendedCurve& ext, const ApproxFunction& psi,
                        long long Qlo, long long Qhi,
                        const std::function<void(const DualTriple&, const IntervalSet&)>& yield,
                        long long budget) {
    if (Qlo < 1 || Qlo > Qhi) throw std::invalid_argument("enumerate requires 1 <= Qlo <= Qhi");
    double C = ext.constants().C;
    long long items = 0;
    IntervalSet set;
    for (long long q = Qlo; q <= Qhi; ++q) {
        double psi_q = psi(q);
        long long pmax = static_cast<long long>(std::floor(C * static_cast<double>(q)));
        for (long long q1 = -q; q1 <= q; ++q1) {
            bool edge1 = std::llabs(q1) == q;
            for (long long q2 = -q; q2 <= q; ++q2) {
                if (!edge1 && std::llabs(q2) != q) continue;
                if (q1 == 0 && q2 == 0) continue;
                // data-driven p window, clipped to the |p| <= Cq contract
                double fa = F_eval(ext, q1, q2, ext.domain().lo);
                double fb = F_eval(ext, q1, q2, ext.domain().hi);
                double fmin = std::min(fa, fb), fmax = std::max(fa, fb);
                if (q2 != 0) {
                    double x0 = critical_point(ext, q1, q2);
                    if (ext.domain().contains(x0)) {
                        double f0 = F_eval(ext, q1, q2, x0);
                        fmin = std::min(fmin, f0);
                        fmax = std::max(fmax, f0);
                    }
                }
                long long plo = std::max(-pmax, static_cast<long long>(std::ceil(fmin - psi_q)));
                long long phi = std::min(pmax, static_cast<long long>(std::floor(fmax + psi_q)));
                for (long long p = plo; p <= phi; ++p) {
                    if (++items > budget)
                        throw budget_error("enumerate budget exceeded at q=" + std::to_string(q));
                    set = solve_mu(ext, psi, q1, q2, p);
                    if (set.parts.empty()) continue;
                    yield(make_triple(ext, psi, q1, q2, p), set);
                }
            }
        }
    }
}

namespace {

EnvelopeScan scan_impl(const ExtendedCurve& ext, const ApproxFunction& psi,
                       long long Qlo, long long Qhi, double slack, bool parallel) {
    if (Qlo < 1 || Qlo > Qhi) throw std::invalid_argument("scan requires 1 <= Qlo <= Qhi");
    long long q_start = std::max(Qlo, psi.q0());
    EnvelopeScan total;
    if (q_start > Qhi) return total;

    EnvelopeParams ep{ext.base().c1, ext.base().c2, ext.constants().M, psi.q0()};
    long long nq = Qhi - q_start + 1;
    std::vector<EnvelopeScan> partial(static_cast<size_t>(nq));

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long qi = 0; qi < nq; ++qi) {
        long long q = q_start + qi;
        double psi_q = psi(q);
        EnvelopeScan local;
        detail::for_each_canonical_pair(q, [&](long long q1, long long q2) {
            auto ctx = detail::make_pair_context(ext, psi_q, q1, q2);
            detail::ladder_pair(ext, ctx, [&](long long p, int, const Interval*, double len) {
                TripleCase kase;
                long long dp = 0;
                if (ctx.theta1)
                    kase = TripleCase::theta1;
                else if (p != ctx.p0) {
                    kase = TripleCase::theta2_p_not_p0;
                    dp = std::llabs(p - ctx.p0);
                } else
                    kase = ctx.small_norm ? TripleCase::theta2_p0_small
                                          : TripleCase::theta2_p0_large;
                double bound = envelope(ep, kase, psi_q, q1, q2, dp, ctx.norm);
                local.triples += 2; // the mirror triple behaves identically
                double ratio = len / bound;
                if (ratio > local.worst_ratio) local.worst_ratio = ratio;
                if (len > bound * (1.0 + 1e-12) + slack) local.violations += 2;
            });
        });
        partial[static_cast<size_t>(qi)] = local;
    }
    for (const EnvelopeScan& s : partial) {
        total.triples += s.triples;
        total.violations += s.violations;
        total.worst_ratio = std::max(total.worst_ratio, s.worst_ratio);
    }
    return total;
}

} // namespace

EnvelopeScan scan_envelope_violations(const ExtendedCurve& ext, const ApproxFunction& psi,
                                      long long Qlo, long long Qhi, double slack) {
    return scan_impl(ext, psi, Qlo, Qhi, slack, true);
}

EnvelopeScan scan_envelope_violations_serial(const ExtendedCurve& ext, const ApproxFunction& psi,
                                             long long Qlo, long long Qhi, double slack) {
    return scan_impl(ext, psi, Qlo, Qhi, slack, false);
}

} // namespace dualcurve
