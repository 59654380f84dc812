#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dualcurve/curve.hpp"
#include "dualcurve/interval.hpp"
#include "dualcurve/rational.hpp"

namespace dualcurve {

// Test function for the near-curve count. Polynomials with (dyadic) rational
// coefficients take the exact arithmetic path; everything else is evaluated
// in extended-precision floating point with a guard band around the
// threshold.
struct PhiSpec {
    enum class Kind { poly, dual, custom };
    Kind kind = Kind::poly;
    std::vector<Rational> coeffs;        // poly, ascending degree
    const ExtendedCurve* ext = nullptr;  // dual: phi = f* of this curve
    std::function<double(double)> fn;    // custom

    static PhiSpec poly(std::vector<Rational> c) { return {Kind::poly, std::move(c), nullptr, {}}; }
    static PhiSpec poly_from_doubles(const std::vector<double>& c);
    static PhiSpec dual(const ExtendedCurve& e) { return {Kind::dual, {}, &e, {}}; }
    static PhiSpec custom(std::function<double(double)> f) { return {Kind::custom, {}, nullptr, std::move(f)}; }

    double eval(double u) const;
    bool exact() const { return kind == Kind::poly; }
};

struct CountQuery {
    PhiSpec phi;
    Interval gamma;              // closed; t/r in gamma
    long long R = 1;             // shell R <= r < 2R
    double delta = 0.125;        // in (0, 1/4] for count_near, (0,1) for weighted_sum
    std::optional<double> lambda; // weighted_sum exponent, in (0,1)
};

struct CountRecord {
    int j = -1, k = -1;          // set when R = 2^j, delta = 2^-k come from a scan
    long long R = 0;
    double delta = 0.0;
    long long count = 0;
    std::optional<double> weighted;
    long long boundary_flags = 0; // float path only: |norm - delta| <= 1e-9, excluded
};

// #{(r,t) : R <= r < 2R, t/r in gamma, ||r phi(t/r)|| < delta}, by direct
// enumeration. OpenMP over r; integer merges make the result identical to
// the serial reference.
CountRecord count_near(const CountQuery& query);
CountRecord count_near_serial(const CountQuery& query);

// sum of ||r phi(t/r)||^-lambda over pairs with norm >= delta. Per-r partial
// sums are combined in ascending r regardless of scheduling.
CountRecord weighted_sum(const CountQuery& query);
CountRecord weighted_sum_serial(const CountQuery& query);

// One record per (j, k) with R = 2^j, delta = 2^-k, in grid order. Throws
// budget_error when the estimated pair count exceeds `budget`.
std::vector<CountRecord> dyadic_scan(const PhiSpec& phi, Interval gamma,
                                     const std::vector<int>& r_exps,
                                     const std::vector<int>& delta_exps,
                                     std::optional<double> lambda,
                                     long long budget);

struct ExponentFit {
    std::optional<double> slope_R;     // d log2(count) / dj at fixed k
    std::optional<double> slope_delta; // d log2(count) / d(-k) at fixed j
    double residual_rms = 0.0;
};

// Least-squares scaling exponents of the count table. Requires counts > 0 on
// the fitted rows and at least 3 distinct values along a fitted axis; throws
// std::invalid_argument when no axis qualifies.
ExponentFit fit_exponents(const std::vector<CountRecord>& table);

} // namespace dualcurve
