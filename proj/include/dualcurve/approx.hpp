#pragma once

#include <functional>
#include <vector>

#include "dualcurve/curve.hpp"
#include "dualcurve/psi.hpp"

namespace dualcurve {

enum class Theta { theta1, theta2 };

// Case split for a triple (q1, q2, p): |q1| > 2M|q2| is the slope-dominated
// regime; otherwise the critical point x0 exists in I' and p is measured
// against p0 = nearest integer to F(x0), with a further split on whether
// ||F(x0)|| clears 2 psi(q).
enum class TripleCase { theta1, theta2_p_not_p0, theta2_p0_small, theta2_p0_large };

const char* triple_case_name(TripleCase c);

struct DualTriple {
    long long q1 = 0, q2 = 0, p = 0;
    long long q = 0; // max(|q1|, |q2|)
    TripleCase kase = TripleCase::theta1;
    // Critical-point data; meaningful for theta2 triples only.
    double x0 = 0.0;
    double fx0 = 0.0;
    long long p0 = 0;
    double norm_fx0 = 0.0; // ||F(x0)||
};

// The solution set {x in I : |F(x) - p| < psi(q)} as at most two closed
// intervals, ordered left to right.
struct IntervalSet {
    std::vector<Interval> parts;
    double total_length = 0.0;
};

// Distance to the nearest integer; in [0, 1/2].
double nearest_int_norm(double x);

// Throws std::invalid_argument on (0, 0).
Theta classify(long long q1, long long q2, const CurveConstants& consts);

// The unique integer with F(x0) - p0 in (-1/2, 1/2]. Throws on q2 == 0.
long long p_zero(const ExtendedCurve& ext, long long q1, long long q2);

IntervalSet solve_mu(const ExtendedCurve& ext, const ApproxFunction& psi,
                     long long q1, long long q2, long long p);

inline double mu_measure(const IntervalSet& set) { return set.total_length; }

// Full classification of (q1, q2, p), including critical-point data.
DualTriple make_triple(const ExtendedCurve& ext, const ApproxFunction& psi,
                       long long q1, long long q2, long long p);

// Case-appropriate upper envelope for |mu(q1,q2,p)|, with explicit constants
// derived from the curvature band c1 <= |F''|/|q2| <= c2:
//   theta1:        2 psi(q) / (|q1| - (M-1)|q2|)
//   p != p0:       sqrt(24 c2 / (c1^2 |q2| |p-p0|)) psi(q)   (requires q >= q0)
//   p = p0, small: sqrt(24 psi(q) / (c1 |q2|))
//   p = p0, large: sqrt(16 c2 / (c1^2 |q2| ||F(x0)||)) psi(q)
// Throws std::invalid_argument when the p != p0 branch is asked below q0.
double theoretical_bound(const DualTriple& triple, const ApproxFunction& psi,
                         const ExtendedCurve& ext);

// Streams every triple with max(|q1|,|q2|) in [Qlo, Qhi], |p| <= C q and
// nonempty mu, in deterministic order (q ascending, then q1, q2, p). Each
// candidate triple costs one budget unit; throws budget_error when exceeded
// (rows already yielded stay valid).
void enumerate_nonempty(const ExtendedCurve& ext, const ApproxFunction& psi,
                        long long Qlo, long long Qhi,
                        const std::function<void(const DualTriple&, const IntervalSet&)>& yield,
                        long long budget);

struct EnvelopeScan {
    long long triples = 0;    // nonempty triples checked (counting sign mirrors)
    long long violations = 0; // mu_measure > theoretical_bound beyond float noise
    double worst_ratio = 0.0; // max mu/bound observed
};

// Checks mu_measure <= theoretical_bound for every nonempty triple with
// q in [max(Qlo, q0), Qhi]. `slack` absorbs double rounding in the measured
// endpoints; the comparison is mu > bound * (1 + 1e-12) + slack.
EnvelopeScan scan_envelope_violations(const ExtendedCurve& ext, const ApproxFunction& psi,
                                      long long Qlo, long long Qhi,
                                      double slack = 1.5e-14);
EnvelopeScan scan_envelope_violations_serial(const ExtendedCurve& ext, const ApproxFunction& psi,
                                             long long Qlo, long long Qhi,
                                             double slack = 1.5e-14);

} // namespace dualcurve
