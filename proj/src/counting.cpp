#include "dualcurve/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualcurve/errors.hpp"
#include "dualcurve/util.hpp"

namespace dualcurve {

PhiSpec PhiSpec::poly_from_doubles(const std::vector<double>& c) {
    std::vector<Rational> r;
    r.reserve(c.size());
    for (double x : c) r.push_back(Rational::from_double(x));
    return poly(std::move(r));
}

double PhiSpec::eval(double u) const {
    switch (kind) {
    case Kind::poly: {
        double acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * u + coeffs[i].to_double();
        return acc;
    }
    case Kind::dual:
        return ext->fstar(u);
    case Kind::custom:
        return fn(u);
    }
    return 0.0;
}

namespace {

constexpr double kGuardBand = 1e-9;

struct ShellRange {
    long long tmin, tmax;
};

// Exact t-range for t/r in [gamma.lo, gamma.hi]; the endpoints are dyadic
// rationals, so the comparison is free of rounding.
ShellRange t_range(long long r, Interval gamma) {
    Rational lo = Rational::from_double(gamma.lo);
    Rational hi = Rational::from_double(gamma.hi);
    auto ceil_div = [](__int128 n, __int128 d) {
        __int128 q = n / d, m = n % d;
        if (m != 0 && ((n > 0) == (d > 0))) ++q;
        return q;
    };
    auto floor_div = [](__int128 n, __int128 d) {
        __int128 q = n / d, m = n % d;
        if (m != 0 && ((n > 0) != (d > 0))) --q;
        return q;
    };
    __int128 tlo = ceil_div(static_cast<__int128>(r) * lo.num, lo.den);
    __int128 thi = floor_div(static_cast<__int128>(r) * hi.num, hi.den);
    return {static_cast<long long>(tlo), static_cast<long long>(thi)};
}

// r * phi(t/r) as an exact rational for a polynomial phi: the i-th term is
// c_i r (t/r)^i, accumulated with a reduced running power of t/r.
Rational poly_r_phi(const std::vector<Rational>& coeffs, long long r, long long t) {
    Rational acc(0);
    Rational pw(r); // r (t/r)^i, starting at i = 0
    Rational step(t, r);
    for (const Rational& c : coeffs) {
        acc = acc + c * pw;
        pw = pw * step;
    }
    return acc;
}

struct RowTally {
    long long count = 0;
    long long flags = 0;
    double weighted = 0.0;
};

// One r row of the shell. `want_weighted` selects the norm >= delta side.
template <bool Exact>
RowTally tally_row(const CountQuery& qy, long long r, bool want_weighted) {
    RowTally out;
    auto [tmin, tmax] = t_range(r, qy.gamma);
    Rational delta_exact = Exact ? Rational::from_double(qy.delta) : Rational(0);
    double lambda = qy.lambda.value_or(0.0);
    KahanSum wsum;
    for (long long t = tmin; t <= tmax; ++t) {
        if constexpr (Exact) {
            Rational v = poly_r_phi(qy.phi.coeffs, r, t);
            Rational nrm = nearest_int_norm(v);
            bool below = nrm < delta_exact;
            if (!want_weighted) {
                if (below) ++out.count;
            } else if (!below) {
                ++out.count;
                wsum.add(std::pow(nrm.to_double(), -lambda));
            }
        } else {
            long double x = static_cast<long double>(r) *
                            static_cast<long double>(qy.phi.eval(static_cast<double>(t) / static_cast<double>(r)));
            long double nrm = fabsl(x - roundl(x));
            double nd = static_cast<double>(nrm);
            if (std::abs(nd - qy.delta) <= kGuardBand) {
                ++out.flags; // threshold-ambiguous; excluded from both sides
                continue;
            }
            bool below = nd < qy.delta;
            if (!want_weighted) {
                if (below) ++out.count;
            } else if (!below) {
                ++out.count;
                wsum.add(std::pow(nd, -lambda));
            }
        }
    }
    out.weighted = wsum.get();
    return out;
}

CountRecord run_shell(const CountQuery& qy, bool want_weighted, bool parallel) {
    if (qy.R < 1) throw std::invalid_argument("count requires R >= 1");
    if (qy.gamma.empty()) throw std::invalid_argument("count requires a nonempty Gamma");
    if (!want_weighted) {
        if (!(qy.delta > 0.0 && qy.delta <= 0.25))
            throw std::invalid_argument("count_near requires delta in (0, 1/4]");
    } else {
        if (!(qy.delta > 0.0 && qy.delta < 1.0))
            throw std::invalid_argument("weighted_sum requires delta in (0, 1)");
        if (!qy.lambda || !(*qy.lambda > 0.0 && *qy.lambda < 1.0))
            throw std::invalid_argument("weighted_sum requires lambda in (0, 1)");
    }
    bool exact = qy.phi.exact();
    long long n = qy.R; // rows r = R .. 2R-1
    std::vector<RowTally> rows(static_cast<size_t>(n));

#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long long i = 0; i < n; ++i) {
        long long r = qy.R + i;
        rows[static_cast<size_t>(i)] =
            exact ? tally_row<true>(qy, r, want_weighted) : tally_row<false>(qy, r, want_weighted);
    }

    CountRecord rec;
    rec.R = qy.R;
    rec.delta = qy.delta;
    KahanSum wsum; // merged in ascending r, independent of scheduling
    for (const RowTally& row : rows) {
        rec.count += row.count;
        rec.boundary_flags += row.flags;
        wsum.add(row.weighted);
    }
    if (want_weighted) rec.weighted = wsum.get();
    return rec;
}

} // namespace

CountRecord count_near(const CountQuery& query) { return run_shell(query, false, true); }
CountRecord count_near_serial(const CountQuery& query) { return run_shell(query, false, false); }
CountRecord weighted_sum(const CountQuery& query) { return run_shell(query, true, true); }
CountRecord weighted_sum_serial(const CountQuery& query) { return run_shell(query, true, false); }

std::vector<CountRecord> dyadic_scan(const PhiSpec& phi, Interval gamma,
                                     const std::vector<int>& r_exps,
                                     const std::vector<int>& delta_exps,
                                     std::optional<double> lambda,
                                     long long budget) {
    if (gamma.empty()) throw std::invalid_argument("dyadic_scan requires a nonempty Gamma");
    double est = 0.0;
    for (int j : r_exps) {
        if (j < 0 || j > 40) throw std::invalid_argument("dyadic_scan exponent out of range");
        double R = std::ldexp(1.0, j);
        est += (R * gamma.length() + 2.0) * R * static_cast<double>(delta_exps.size());
    }
    if (est > static_cast<double>(budget))
        throw budget_error("dyadic_scan estimated pair count exceeds budget");

    std::vector<CountRecord> table;
    for (int j : r_exps) {
        for (int k : delta_exps) {
            CountQuery qy;
            qy.phi = phi;
            qy.gamma = gamma;
            qy.R = pow2ll(j);
            qy.delta = std::ldexp(1.0, -k);
            qy.lambda = lambda;
            CountRecord rec = count_near(qy);
            if (lambda) {
                CountQuery wq = qy;
                CountRecord w = weighted_sum(wq);
                rec.weighted = w.weighted;
                rec.boundary_flags += w.boundary_flags;
            }
            rec.j = j;
            rec.k = k;
            table.push_back(rec);
        }
    }
    return table;
}

namespace {

// Simple least squares of y against x; returns (slope, residual sum of squares).
std::pair<double, double> ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double icept = (sy - slope * sx) / n;
    double rss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (slope * x[i] + icept);
        rss += e * e;
    }
    return {slope, rss};
}

} // namespace

ExponentFit fit_exponents(const std::vector<CountRecord>& table) {
    for (const CountRecord& r : table)
        if (r.count <= 0) throw std::invalid_argument("fit_exponents requires positive counts");

    auto fit_axis = [&](bool along_j) -> std::pair<std::optional<double>, std::pair<double, long long>> {
        // group rows by the frozen axis, fit log2(count) against the moving one
        std::vector<double> slopes;
        double rss = 0;
        long long npts = 0;
        std::vector<int> keys;
        for (const CountRecord& r : table) {
            int key = along_j ? r.k : r.j;
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
        }
        for (int key : keys) {
            std::vector<double> xs, ys;
            for (const CountRecord& r : table) {
                if ((along_j ? r.k : r.j) != key) continue;
                double x = along_j ? static_cast<double>(r.j) : -static_cast<double>(r.k);
                if (std::find(xs.begin(), xs.end(), x) != xs.end()) continue;
                xs.push_back(x);
                ys.push_back(std::log2(static_cast<double>(r.count)));
            }
            if (xs.size() < 3) continue;
            auto [slope, r2] = ls_slope(xs, ys);
            slopes.push_back(slope);
            rss += r2;
            npts += static_cast<long long>(xs.size());
        }
        if (slopes.empty()) return {std::nullopt, {0.0, 0}};
        double mean = 0;
        for (double s : slopes) mean += s;
        return {mean / static_cast<double>(slopes.size()), {rss, npts}};
    };

    ExponentFit fit;
    auto [sr, rs1] = fit_axis(true);
    auto [sd, rs2] = fit_axis(false);
    fit.slope_R = sr;
    fit.slope_delta = sd;
    if (!sr && !sd)
        throw std::invalid_argument("fit_exponents: no axis has 3+ distinct values (degenerate table)");
    long long n = rs1.second + rs2.second;
    fit.residual_rms = n > 0 ? std::sqrt((rs1.first + rs2.first) / static_cast<double>(n)) : 0.0;
    return fit;
}

} // namespace dualcurve
