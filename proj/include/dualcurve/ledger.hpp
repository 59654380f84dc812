#pragma once

#include <vector>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"
#include "dualcurve/psi.hpp"

namespace dualcurve {

// Partial sum of psi(q)^s q^(2-s) for q = 1..Q, accumulated ascending.
// s in (0, 1].
double series_partial(const ApproxFunction& psi, double s, long long Q);

// max{psi(q), q^(1-(3+eps0)/s)} as a new approximation function.
ApproxFunction psi_hat(const ApproxFunction& psi, double s, double eps0);

// 3/(nu+1); the expected dimension transition for psi = q^-nu on a planar
// curve. Requires nu > 2.
double critical_exponent(double nu);

// Bucket order used throughout the ledger.
enum BucketIndex { bucket_theta1 = 0, bucket_p_not_p0 = 1, bucket_p0_small = 2, bucket_p0_large = 3 };

struct BlockRecord {
    int k = 0;
    long long q_lo = 0, q_hi = 0; // heights [2^k, 2^(k+1)) clipped to the run
    double cost[4] = {0, 0, 0, 0};  // sum of |mu|^s per case bucket
    double bound[4] = {0, 0, 0, 0}; // envelope sums per bucket (see below)
    long long triples_seen = 0;
    bool below_q0 = false; // bound comparisons are only asserted at 2^k >= q0
    double paper_form = 0.0; // psi(2^k)^s (2^k)^(3-s), the reference shape
};

// Per-dyadic-block accounting of the cover sum with the proof's case split.
// Costs are measured; bounds are computed without solving any mu:
//   theta1, p != p0: a-priori sums of per-triple envelopes over all candidate
//                    triples of the block;
//   p = p0 buckets:  per-pair envelopes summed over the pairs observed in
//                    each norm class (the pair counts stand in for the
//                    near-curve counting input).
// K is the largest ratio of (p0 bucket bounds) to paper_form over blocks with
// 2^k >= q0.
struct BlockLedger {
    double s = 0.0;
    double M = 0, C = 0, c1 = 0, c2 = 0;
    long long q0 = 0;
    double K = 0.0;
    std::vector<BlockRecord> blocks;
};

BlockLedger cover_sum_by_case(const ExtendedCurve& ext, const ApproxFunction& psi,
                              double s, int kmin, int kmax, long long budget);
BlockLedger cover_sum_by_case_serial(const ExtendedCurve& ext, const ApproxFunction& psi,
                                     double s, int kmin, int kmax, long long budget);

struct TailRow {
    int k = 0;
    double total_cost = 0.0;
    double ratio_to_previous = 0.0; // NaN on the first block
};

std::vector<TailRow> tail_decay_report(const BlockLedger& ledger);

} // namespace dualcurve
