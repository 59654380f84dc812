#include "dualcurve/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualcurve/errors.hpp"
#include "dualcurve/util.hpp"
#include "mu_ladder.hpp"

namespace dualcurve {

std::vector<Interval> build_tail_cover(const ExtendedCurve& ext, const ApproxFunction& psi,
                                       long long Q0, long long Q1,
                                       long long budget, long long max_intervals) {
    if (Q0 < 1 || Q0 > Q1) throw std::invalid_argument("cover requires 1 <= Q0 <= Q1");
    double C = ext.constants().C;
    double est = 0.0;
    for (long long q = Q0; q <= Q1; ++q) est += detail::ladder_items_estimate(q, C);
    if (est > static_cast<double>(budget))
        throw budget_error("cover estimated item count exceeds budget");

    long long nq = Q1 - Q0 + 1;
    std::vector<std::vector<Interval>> per_q(static_cast<size_t>(nq));

#pragma omp parallel for schedule(dynamic)
    for (long long qi = 0; qi < nq; ++qi) {
        long long q = Q0 + qi;
        double psi_q = psi(q);
        std::vector<Interval>& out = per_q[static_cast<size_t>(qi)];
        detail::for_each_canonical_pair(q, [&](long long q1, long long q2) {
            auto ctx = detail::make_pair_context(ext, psi_q, q1, q2);
            detail::ladder_pair(ext, ctx, [&](long long, int nparts, const Interval* parts, double) {
                for (int i = 0; i < nparts; ++i) out.push_back(parts[i]);
            });
        });
    }

    long long total = 0;
    for (const auto& v : per_q) total += static_cast<long long>(v.size());
    if (total > max_intervals)
        throw budget_error("cover holds " + std::to_string(total) + " intervals, over the limit");

    std::vector<Interval> cover;
    cover.reserve(static_cast<size_t>(total));
    for (auto& v : per_q) {
        cover.insert(cover.end(), v.begin(), v.end());
        v.clear();
        v.shrink_to_fit();
    }
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    return cover;
}

CoverEstimate hs_cost(std::vector<Interval> cover, double s, double rho) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("hs_cost requires s in (0, 1]");
    if (!(rho > 0.0)) throw std::invalid_argument("hs_cost requires rho > 0");
    CoverEstimate est;
    est.s = s;
    est.rho = rho;
    std::vector<Interval> merged = merge_overlaps(std::move(cover));
    KahanSum cost;
    for (const Interval& iv : merged) {
        double len = iv.length();
        if (len <= 0.0) { est.interval_count += 1; continue; }
        double m = std::ceil(len / rho);
        if (m < 1.0) m = 1.0;
        cost.add(m * std::pow(len / m, s));
        est.interval_count += static_cast<long long>(m);
    }
    est.cost = cost.get();
    return est;
}

DimScanResult dimension_scan(const ExtendedCurve& ext, double nu,
                             const std::vector<double>& s_grid_in,
                             const std::vector<int>& k_grid_in,
                             double decay_threshold,
                             long long budget, long long max_intervals) {
    if (!(nu > 2.0)) throw std::invalid_argument("dimension_scan requires nu > 2");
    if (s_grid_in.empty() || k_grid_in.empty())
        throw std::invalid_argument("dimension_scan requires nonempty grids");
    std::vector<double> s_grid = s_grid_in;
    std::vector<int> k_grid = k_grid_in;
    std::sort(s_grid.begin(), s_grid.end());
    s_grid.erase(std::unique(s_grid.begin(), s_grid.end()), s_grid.end());
    std::sort(k_grid.begin(), k_grid.end());
    k_grid.erase(std::unique(k_grid.begin(), k_grid.end()), k_grid.end());
    if (k_grid.size() < 2)
        throw std::invalid_argument("dimension_scan requires at least two k values");
    for (double s : s_grid)
        if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("s grid must lie in (0, 1]");

    ApproxFunction psi = ApproxFunction::power(nu);
    size_t nk = k_grid.size(), ns = s_grid.size();
    // cost[si][ki]
    std::vector<std::vector<double>> cost(ns, std::vector<double>(nk, 0.0));
    std::vector<std::vector<long long>> icount(ns, std::vector<long long>(nk, 0));
    std::vector<double> rho_k(nk, 0.0);

    for (size_t ki = 0; ki < nk; ++ki) {
        int k = k_grid[ki];
        long long Q0 = pow2ll(k), Q1 = pow2ll(k + 1);
        std::vector<Interval> cover = build_tail_cover(ext, psi, Q0, Q1, budget, max_intervals);
        std::vector<Interval> merged = merge_overlaps(std::move(cover));
        rho_k[ki] = 2.0 * psi(Q0) / static_cast<double>(Q0);
        for (size_t si = 0; si < ns; ++si) {
            CoverEstimate est = hs_cost(merged, s_grid[si], rho_k[ki]);
            cost[si][ki] = est.cost;
            icount[si][ki] = est.interval_count;
        }
    }

    DimScanResult res;
    std::vector<bool> shrinking(ns, false);
    for (size_t si = 0; si < ns; ++si) {
        double first = cost[si][0], last = cost[si][nk - 1];
        double mean_ratio = (first > 0.0 && last > 0.0)
                                ? std::pow(last / first, 1.0 / static_cast<double>(nk - 1))
                                : 0.0;
        shrinking[si] = mean_ratio <= decay_threshold;
        for (size_t ki = 0; ki < nk; ++ki) {
            DimScanRow row;
            row.s = s_grid[si];
            row.k = k_grid[ki];
            row.Q0 = pow2ll(k_grid[ki]);
            row.Q1 = pow2ll(k_grid[ki] + 1);
            row.rho = rho_k[ki];
            row.cost = cost[si][ki];
            row.interval_count = icount[si][ki];
            row.classification = shrinking[si] ? "shrinking" : "growing";
            res.rows.push_back(row);
        }
    }

    bool has_g = false, has_s = false;
    double gmax = 0.0, smin = 0.0;
    for (size_t si = 0; si < ns; ++si)
        if (!shrinking[si]) { has_g = true; gmax = s_grid[si]; }
    for (size_t si = ns; si-- > 0;)
        if (shrinking[si]) { has_s = true; smin = s_grid[si]; }
    if (has_g && has_s && gmax < smin) {
        res.bracketed = true;
        res.largest_growing = gmax;
        res.smallest_shrinking = smin;
        res.s_hat = 0.5 * (gmax + smin);
        // mixed ordering (a shrinking s below a growing one) is still noise
        for (size_t si = 0; si + 1 < ns; ++si)
            if (shrinking[si] && !shrinking[si + 1])
                res.note = "noisy classification: shrinking below growing in the grid";
    } else {
        res.bracketed = false;
        res.s_hat = std::nan("");
        res.note = has_g ? (has_s ? "classifications interleave; transition not bracketed"
                                  : "every s grows; transition above the grid")
                         : "every s shrinks; transition below the grid";
        if (has_g) res.largest_growing = gmax;
        if (has_s) res.smallest_shrinking = smin;
    }
    return res;
}

} // namespace dualcurve
