#include "dualcurve/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualcurve/errors.hpp"
#include "dualcurve/util.hpp"
#include "mu_ladder.hpp"

namespace dualcurve {

double series_partial(const ApproxFunction& psi, double s, long long Q) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("series requires s in (0, 1]");
    if (Q < 1) throw std::invalid_argument("series requires Q >= 1");
    KahanSum acc;
    for (long long q = 1; q <= Q; ++q)
        acc.add(std::pow(psi(q), s) * std::pow(static_cast<double>(q), 2.0 - s));
    return acc.get();
}

ApproxFunction psi_hat(const ApproxFunction& psi, double s, double eps0) {
    return ApproxFunction::truncated(psi, s, eps0);
}

double critical_exponent(double nu) {
    if (!(nu > 2.0)) throw std::invalid_argument("critical_exponent requires nu > 2");
    return 3.0 / (nu + 1.0);
}

namespace {

struct QPartial {
    KahanSum cost[4];
    KahanSum bound[4];
    long long triples = 0;
};

// Largest |f*| over J; f* has a single extremum, where g vanishes
// (at y = -f1ext(0)).
double fstar_sup(const ExtendedCurve& ext) {
    double m = std::max(std::abs(ext.fstar(ext.J().lo)), std::abs(ext.fstar(ext.J().hi)));
    double yc = -ext.f1ext(0.0);
    if (ext.J().contains(yc)) m = std::max(m, std::abs(ext.fstar(yc)));
    return m;
}

BlockLedger cover_sum_impl(const ExtendedCurve& ext, const ApproxFunction& psi,
                           double s, int kmin, int kmax, long long budget, bool parallel) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("cover sum requires s in (0, 1]");
    if (kmin < 0 || kmax < kmin || kmax > 30)
        throw std::invalid_argument("cover sum requires 0 <= kmin <= kmax <= 30");

    const double c1 = ext.base().c1, c2 = ext.base().c2;
    const double M = ext.constants().M, C = ext.constants().C;

    double est = 0.0;
    for (long long q = pow2ll(kmin); q < pow2ll(kmax + 1); ++q)
        est += detail::ladder_items_estimate(q, C);
    if (est > static_cast<double>(budget))
        throw budget_error("cover sum estimated item count exceeds budget");

    // prefix[d] = sum_{e=1..d} e^(-s/2), for the a-priori p != p0 envelope sum
    double pstar = fstar_sup(ext);
    long long d_cap = static_cast<long long>(std::ceil((C + pstar + 2.0) * std::ldexp(1.0, kmax + 1))) + 4;
    std::vector<double> prefix(static_cast<size_t>(d_cap) + 1, 0.0);
    for (long long d = 1; d <= d_cap; ++d)
        prefix[static_cast<size_t>(d)] =
            prefix[static_cast<size_t>(d - 1)] + std::pow(static_cast<double>(d), -0.5 * s);

    const double coef_pnot = std::sqrt(24.0 * c2 / (c1 * c1));
    const double coef_large = std::sqrt(16.0 * c2 / (c1 * c1));

    BlockLedger ledger;
    ledger.s = s;
    ledger.M = M;
    ledger.C = C;
    ledger.c1 = c1;
    ledger.c2 = c2;
    ledger.q0 = psi.has_q0() ? psi.q0() : -1;

    for (int k = kmin; k <= kmax; ++k) {
        long long q_lo = pow2ll(k), q_hi = pow2ll(k + 1) - 1;
        long long nq = q_hi - q_lo + 1;
        std::vector<QPartial> partial(static_cast<size_t>(nq));

#pragma omp parallel for schedule(dynamic) if (parallel)
        for (long long qi = 0; qi < nq; ++qi) {
            long long q = q_lo + qi;
            double psi_q = psi(q);
            QPartial& P = partial[static_cast<size_t>(qi)];
            long long pcount = 2 * static_cast<long long>(std::floor(C * static_cast<double>(q))) + 3;
            detail::for_each_canonical_pair(q, [&](long long q1, long long q2) {
                auto ctx = detail::make_pair_context(ext, psi_q, q1, q2);
                double a2 = static_cast<double>(std::llabs(q2));
                int pair_bucket = -1;
                if (ctx.theta1) {
                    double d1 = static_cast<double>(std::llabs(q1)) - (M - 1.0) * a2;
                    P.bound[bucket_theta1].add(
                        2.0 * pcount * std::pow(2.0 * psi_q / d1, s));
                } else {
                    double env_base = std::pow(coef_pnot * psi_q / std::sqrt(a2), s);
                    long long dmax = static_cast<long long>(std::floor(C * static_cast<double>(q))) + 2 +
                                     std::llabs(ctx.p0);
                    if (dmax > d_cap) dmax = d_cap;
                    P.bound[bucket_p_not_p0].add(2.0 * env_base * 2.0 * prefix[static_cast<size_t>(dmax)]);
                    if (ctx.small_norm) {
                        pair_bucket = bucket_p0_small;
                        P.bound[bucket_p0_small].add(
                            2.0 * std::pow(std::sqrt(24.0 * psi_q / (c1 * a2)), s));
                    } else {
                        pair_bucket = bucket_p0_large;
                        P.bound[bucket_p0_large].add(
                            2.0 * std::pow(coef_large * psi_q / std::sqrt(a2 * ctx.norm), s));
                    }
                }
                detail::ladder_pair(ext, ctx, [&](long long p, int, const Interval*, double len) {
                    int bucket;
                    if (ctx.theta1)
                        bucket = bucket_theta1;
                    else if (p != ctx.p0)
                        bucket = bucket_p_not_p0;
                    else
                        bucket = pair_bucket;
                    P.cost[bucket].add(2.0 * std::pow(len, s));
                    P.triples += 2;
                });
            });
        }

        BlockRecord rec;
        rec.k = k;
        rec.q_lo = q_lo;
        rec.q_hi = q_hi;
        rec.below_q0 = !psi.has_q0() || q_lo < psi.q0();
        rec.paper_form = std::pow(psi(q_lo), s) * std::pow(static_cast<double>(q_lo), 3.0 - s);
        KahanSum cost[4], bound[4];
        for (const QPartial& P : partial) {
            for (int b = 0; b < 4; ++b) {
                cost[b].add(P.cost[b].get());
                bound[b].add(P.bound[b].get());
            }
            rec.triples_seen += P.triples;
        }
        for (int b = 0; b < 4; ++b) {
            rec.cost[b] = cost[b].get();
            rec.bound[b] = bound[b].get();
        }
        ledger.blocks.push_back(rec);
    }

    double K = 0.0;
    for (const BlockRecord& rec : ledger.blocks)
        if (!rec.below_q0 && rec.paper_form > 0.0)
            K = std::max(K, (rec.bound[bucket_p0_small] + rec.bound[bucket_p0_large]) / rec.paper_form);
    ledger.K = K;
    return ledger;
}

} // namespace

BlockLedger cover_sum_by_case(const ExtendedCurve& ext, const ApproxFunction& psi,
                              double s, int kmin, int kmax, long long budget) {
    return cover_sum_impl(ext, psi, s, kmin, kmax, budget, true);
}

BlockLedger cover_sum_by_case_serial(const ExtendedCurve& ext, const ApproxFunction& psi,
                                     double s, int kmin, int kmax, long long budget) {
    return cover_sum_impl(ext, psi, s, kmin, kmax, budget, false);
}

std::vector<TailRow> tail_decay_report(const BlockLedger& ledger) {
    if (ledger.blocks.size() < 2)
        throw std::invalid_argument("tail_decay_report needs at least two blocks");
    std::vector<TailRow> rows;
    rows.reserve(ledger.blocks.size());
    double prev = 0.0;
    for (size_t i = 0; i < ledger.blocks.size(); ++i) {
        const BlockRecord& b = ledger.blocks[i];
        double total = b.cost[0] + b.cost[1] + b.cost[2] + b.cost[3];
        TailRow row;
        row.k = b.k;
        row.total_cost = total;
        row.ratio_to_previous = i == 0 ? std::nan("") : total / prev;
        rows.push_back(row);
        prev = total;
    }
    return rows;
}

} // namespace dualcurve
