#pragma once

#include <string>
#include <vector>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"

namespace dualcurve {

// All nonempty mu parts for heights q in [Q0, Q1], deduplicated by exact
// equality only (overlaps are kept; hs_cost merges them). Sorted by (lo, hi).
// Throws budget_error when the estimated work or the interval count exceeds
// the limits.
std::vector<Interval> build_tail_cover(const ExtendedCurve& ext, const ApproxFunction& psi,
                                       long long Q0, long long Q1,
                                       long long budget, long long max_intervals);

struct CoverEstimate {
    double s = 0.0;
    double rho = 0.0;
    double cost = 0.0; // sum of diam^s over the rho-refined cover (upper bound)
    long long interval_count = 0;
    long long Q0 = 0, Q1 = 0;
};

// Merges overlaps, splits every interval longer than rho into ceil(len/rho)
// equal pieces, and sums diam^s. s in (0, 1], rho > 0.
CoverEstimate hs_cost(std::vector<Interval> cover, double s, double rho);

struct DimScanRow {
    double s = 0.0;
    int k = 0;
    long long Q0 = 0, Q1 = 0;
    double rho = 0.0;
    double cost = 0.0;
    long long interval_count = 0;
    std::string classification; // "shrinking" or "growing"
};

struct DimScanResult {
    std::vector<DimScanRow> rows; // grid order: s outer, k inner
    bool bracketed = false;
    double s_hat = 0.0; // midpoint of (largest growing, smallest shrinking)
    double largest_growing = 0.0;
    double smallest_shrinking = 0.0;
    std::string note; // nonempty when the transition is not cleanly bracketed
};

// For psi = q^-nu: per-block tail covers at Q0 = 2^k, Q1 = 2^(k+1), costed at
// rho = 2 psi(2^k)/2^k, classified by the geometric-mean decay of costs
// across the k grid (factor <= decay_threshold means shrinking).
DimScanResult dimension_scan(const ExtendedCurve& ext, double nu,
                             const std::vector<double>& s_grid,
                             const std::vector<int>& k_grid,
                             double decay_threshold,
                             long long budget, long long max_intervals);

} // namespace dualcurve
