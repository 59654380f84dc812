#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <string_view>

#include "dualcurve/interval.hpp"

namespace dualcurve {

enum class CurveKind { parabola, exponential, circle_arc, custom };

// A C^2 graph y = f(x) on a compact interval, uniformly convex or concave:
// 0 < c1 <= |f''| <= c2 on the domain, with f'' of fixed sign. Curves are
// supplied as an evaluator triple; derivative consistency is checked against
// finite differences rather than trusted.
struct PlanarCurve {
    CurveKind kind = CurveKind::custom;
    std::function<double(double)> f;
    std::function<double(double)> f1;
    std::function<double(double)> f2;
    Interval domain;
    double c1 = 0.0;
    double c2 = 0.0;
    int sign = +1; // sign of f'' on the domain
};

// M = 1 + max |f'| and C = max(|x| + |f(x)| + 1) over the domain. Exact
// closed forms for the builtin curves; sampled with a 1% outward margin for
// user-supplied evaluators.
struct CurveConstants {
    double M = 0.0;
    double C = 0.0;
};

// Builtin curves: "parabola" f(x)=x^2, "exponential" f(x)=e^x, "circle_arc"
// f(x)=sqrt(1-x^2) (domain must stay within [-0.9, 0.9]). Throws
// std::invalid_argument for unknown names or domains that break the
// convexity certificate.
PlanarCurve builtin_curve(std::string_view name, Interval domain);

// Certifies a black-box evaluator triple by dense sampling (n points),
// relaxing c1/c2 outward by 1%. Throws if f'' changes sign, vanishes, or the
// derivative evaluators disagree with finite differences.
PlanarCurve make_custom_curve(std::function<double(double)> f,
                              std::function<double(double)> f1,
                              std::function<double(double)> f2,
                              Interval domain, int samples = 10000);

CurveConstants curve_constants(const PlanarCurve& curve);

// The curve together with its global second-order Taylor extension, the
// slope inverse g (inverse of -f' on all of R) and the dual curve
// f*(y) = y g(y) + f(g(y)). Immutable; safe to share across threads.
class ExtendedCurve {
public:
    ExtendedCurve() = default;

    // Hot path of the enumeration kernels; kept inline.
    double fext(double x) const {
        if (x < a_) { double d = x - a_; return fa_ + f1a_ * d + 0.5 * f2a_ * d * d; }
        if (x > b_) { double d = x - b_; return fb_ + f1b_ * d + 0.5 * f2b_ * d * d; }
        return f_inner(x);
    }
    double f1ext(double x) const {
        if (x < a_) return f1a_ + f2a_ * (x - a_);
        if (x > b_) return f1b_ + f2b_ * (x - b_);
        return f1_inner(x);
    }
    double f2ext(double x) const {
        if (x < a_) return f2a_;
        if (x > b_) return f2b_;
        return f2_inner(x);
    }

    // Fused value + first derivative; one transcendental call instead of two.
    void fext_pair(double x, double& f, double& f1) const {
        if (x < a_) {
            double d = x - a_;
            f = fa_ + f1a_ * d + 0.5 * f2a_ * d * d;
            f1 = f1a_ + f2a_ * d;
            return;
        }
        if (x > b_) {
            double d = x - b_;
            f = fb_ + f1b_ * d + 0.5 * f2b_ * d * d;
            f1 = f1b_ + f2b_ * d;
            return;
        }
        switch (base_.kind) {
        case CurveKind::parabola: f = x * x; f1 = 2.0 * x; return;
        case CurveKind::exponential: f = std::exp(x); f1 = f; return;
        case CurveKind::circle_arc: {
            double s = std::sqrt(1.0 - x * x);
            f = s;
            f1 = -x / s;
            return;
        }
        default: f = base_.f(x); f1 = base_.f1(x); return;
        }
    }

    // x with f1ext(x) = -y; unique by strict monotonicity of f1ext.
    double g(double y) const;
    double fstar(double y) const { return y * g(y) + fext(g(y)); }

    const PlanarCurve& base() const { return base_; }
    const CurveConstants& constants() const { return consts_; }
    Interval domain() const { return base_.domain; }
    Interval J() const { return J_; }
    Interval Iprime() const { return Iprime_; }

    friend ExtendedCurve extend(const PlanarCurve& curve);

private:
    double f_inner(double x) const {
        switch (base_.kind) {
        case CurveKind::parabola: return x * x;
        case CurveKind::exponential: return std::exp(x);
        case CurveKind::circle_arc: return std::sqrt(1.0 - x * x);
        default: return base_.f(x);
        }
    }
    double f1_inner(double x) const {
        switch (base_.kind) {
        case CurveKind::parabola: return 2.0 * x;
        case CurveKind::exponential: return std::exp(x);
        case CurveKind::circle_arc: return -x / std::sqrt(1.0 - x * x);
        default: return base_.f1(x);
        }
    }
    double f2_inner(double x) const {
        switch (base_.kind) {
        case CurveKind::parabola: return 2.0;
        case CurveKind::exponential: return std::exp(x);
        case CurveKind::circle_arc: { double s = 1.0 - x * x; return -1.0 / (s * std::sqrt(s)); }
        default: return base_.f2(x);
        }
    }

    PlanarCurve base_;
    CurveConstants consts_;
    double a_ = 0, b_ = 0;
    double fa_ = 0, fb_ = 0, f1a_ = 0, f1b_ = 0, f2a_ = 0, f2b_ = 0;
    Interval J_;
    Interval Iprime_;
};

ExtendedCurve extend(const PlanarCurve& curve);

inline double slope_inverse(const ExtendedCurve& ext, double y) { return ext.g(y); }

// x0 with q1 + q2 f1ext(x0) = 0. Throws on q2 == 0.
double critical_point(const ExtendedCurve& ext, long long q1, long long q2);

inline double F_eval(const ExtendedCurve& ext, long long q1, long long q2, double x) {
    return static_cast<double>(q1) * x + static_cast<double>(q2) * ext.fext(x);
}

inline double dual_eval(const ExtendedCurve& ext, double y) { return ext.fstar(y); }

} // namespace dualcurve
