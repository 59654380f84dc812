#include "dualcurve/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualcurve/errors.hpp"
#include "dualcurve/rootfind.hpp"

namespace dualcurve {

namespace {

void require_domain(Interval domain) {
    if (!(domain.lo < domain.hi))
        throw std::invalid_argument("curve domain must satisfy a < b");
    if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi))
        throw std::invalid_argument("curve domain must be finite");
}

// |x| + |f(x)| + 1 maximised over candidate points.
double max_over(const std::vector<double>& xs, const std::function<double(double)>& h) {
    double m = -1e300;
    for (double x : xs) m = std::max(m, h(x));
    return m;
}

} // namespace

PlanarCurve builtin_curve(std::string_view name, Interval domain) {
    require_domain(domain);
    PlanarCurve c;
    c.domain = domain;
    if (name == "parabola") {
        c.kind = CurveKind::parabola;
        c.f = [](double x) { return x * x; };
        c.f1 = [](double x) { return 2.0 * x; };
        c.f2 = [](double) { return 2.0; };
        c.c1 = 2.0;
        c.c2 = 2.0;
        c.sign = +1;
    } else if (name == "exponential") {
        c.kind = CurveKind::exponential;
        c.f = [](double x) { return std::exp(x); };
        c.f1 = [](double x) { return std::exp(x); };
        c.f2 = [](double x) { return std::exp(x); };
        c.c1 = std::exp(domain.lo);
        c.c2 = std::exp(domain.hi);
        c.sign = +1;
    } else if (name == "circle_arc") {
        if (domain.lo < -0.9 || domain.hi > 0.9)
            throw std::invalid_argument("circle_arc domain must stay within [-0.9, 0.9]");
        c.kind = CurveKind::circle_arc;
        c.f = [](double x) { return std::sqrt(1.0 - x * x); };
        c.f1 = [](double x) { return -x / std::sqrt(1.0 - x * x); };
        c.f2 = [](double x) { double s = 1.0 - x * x; return -1.0 / (s * std::sqrt(s)); };
        // |f''| = (1-x^2)^(-3/2) grows with |x|.
        double lo_abs = (domain.lo <= 0.0 && domain.hi >= 0.0)
                            ? 0.0
                            : std::min(std::abs(domain.lo), std::abs(domain.hi));
        double hi_abs = std::max(std::abs(domain.lo), std::abs(domain.hi));
        c.c1 = 1.0 / std::pow(1.0 - lo_abs * lo_abs, 1.5);
        c.c2 = 1.0 / std::pow(1.0 - hi_abs * hi_abs, 1.5);
        c.sign = -1;
    } else {
        throw std::invalid_argument("unknown curve name: " + std::string(name));
    }
    return c;
}

PlanarCurve make_custom_curve(std::function<double(double)> f,
                              std::function<double(double)> f1,
                              std::function<double(double)> f2,
                              Interval domain, int samples) {
    require_domain(domain);
    if (samples < 16) throw std::invalid_argument("need at least 16 certification samples");
    PlanarCurve c;
    c.kind = CurveKind::custom;
    c.domain = domain;

    double lo = domain.lo, hi = domain.hi;
    double h_fd = (hi - lo) / (8.0 * samples);
    double c1s = 1e300, c2s = 0.0;
    int sign = 0;
    for (int i = 0; i <= samples; ++i) {
        double x = lo + (hi - lo) * i / samples;
        double d2 = f2(x);
        if (d2 == 0.0) throw std::invalid_argument("f'' vanishes on the domain");
        int s = d2 > 0.0 ? +1 : -1;
        if (sign == 0) sign = s;
        if (s != sign) throw std::invalid_argument("f'' changes sign on the domain");
        c1s = std::min(c1s, std::abs(d2));
        c2s = std::max(c2s, std::abs(d2));
        // derivative consistency against central differences
        double xl = std::max(lo, x - h_fd), xr = std::min(hi, x + h_fd);
        double fd1 = (f(xr) - f(xl)) / (xr - xl);
        if (std::abs(fd1 - f1((xl + xr) / 2)) > 1e-6 * (1.0 + std::abs(f1(x))) + 1e-6)
            throw std::invalid_argument("f' disagrees with finite differences of f");
        double fd2 = (f1(xr) - f1(xl)) / (xr - xl);
        if (std::abs(fd2 - f2((xl + xr) / 2)) > 1e-6 * (1.0 + std::abs(f2(x))) + 1e-6)
            throw std::invalid_argument("f'' disagrees with finite differences of f'");
    }
    c.f = std::move(f);
    c.f1 = std::move(f1);
    c.f2 = std::move(f2);
    c.c1 = c1s * 0.99; // 1% outward margin: sampled extrema are not exact
    c.c2 = c2s * 1.01;
    c.sign = sign;
    return c;
}

CurveConstants curve_constants(const PlanarCurve& curve) {
    CurveConstants k;
    double a = curve.domain.lo, b = curve.domain.hi;
    auto height = [&](double x) { return std::abs(x) + std::abs(curve.f(x)) + 1.0; };
    switch (curve.kind) {
    case CurveKind::parabola:
        k.M = 1.0 + 2.0 * std::max(std::abs(a), std::abs(b));
        k.C = max_over({a, b}, height);
        break;
    case CurveKind::exponential:
        k.M = 1.0 + std::exp(b);
        k.C = max_over({a, b}, height);
        break;
    case CurveKind::circle_arc: {
        double m = std::max(std::abs(a), std::abs(b));
        k.M = 1.0 + m / std::sqrt(1.0 - m * m);
        // |x| + sqrt(1-x^2) peaks at |x| = 1/sqrt(2)
        std::vector<double> cand = {a, b};
        double r = 1.0 / std::sqrt(2.0);
        if (a <= r && r <= b) cand.push_back(r);
        if (a <= -r && -r <= b) cand.push_back(-r);
        k.C = max_over(cand, height);
        break;
    }
    case CurveKind::custom: {
        const int n = 10000;
        double m1 = 0.0, mc = 0.0;
        for (int i = 0; i <= n; ++i) {
            double x = a + (b - a) * i / n;
            m1 = std::max(m1, std::abs(curve.f1(x)));
            mc = std::max(mc, std::abs(x) + std::abs(curve.f(x)));
        }
        k.M = 1.0 + 1.01 * m1;
        k.C = 1.0 + 1.01 * mc;
        break;
    }
    }
    return k;
}

double ExtendedCurve::g(double y) const {
    double t = -y; // solve f1ext(x) = t
    if (base_.kind == CurveKind::parabola)
        return 0.5 * t; // f1ext(x) = 2x everywhere
    // f1ext is linear outside [a, b], so those ranges solve exactly.
    bool rising = base_.sign > 0; // f1 increasing iff f'' > 0
    if (rising) {
        if (t <= f1a_) return a_ + (t - f1a_) / f2a_;
        if (t >= f1b_) return b_ + (t - f1b_) / f2b_;
    } else {
        if (t >= f1a_) return a_ + (t - f1a_) / f2a_;
        if (t <= f1b_) return b_ + (t - f1b_) / f2b_;
    }
    return solve_bracketed([&](double x) { return f1_inner(x) - t; },
                           [&](double x) { return f2_inner(x); },
                           a_, b_, f1a_ - t, f1b_ - t);
}

ExtendedCurve extend(const PlanarCurve& curve) {
    if (!(curve.c1 > 0.0) || curve.c1 > curve.c2)
        throw std::invalid_argument("curve certificate requires 0 < c1 <= c2");
    ExtendedCurve e;
    e.base_ = curve;
    e.consts_ = curve_constants(curve);
    e.a_ = curve.domain.lo;
    e.b_ = curve.domain.hi;
    e.fa_ = curve.f(e.a_);
    e.fb_ = curve.f(e.b_);
    e.f1a_ = curve.f1(e.a_);
    e.f1b_ = curve.f1(e.b_);
    e.f2a_ = curve.f2(e.a_);
    e.f2b_ = curve.f2(e.b_);
    double M = e.consts_.M;
    e.J_ = Interval(-2.0 * M, 2.0 * M);
    double g1 = e.g(e.J_.lo), g2 = e.g(e.J_.hi);
    e.Iprime_ = Interval(std::min(g1, g2), std::max(g1, g2));
    return e;
}

double critical_point(const ExtendedCurve& ext, long long q1, long long q2) {
    if (q2 == 0) throw std::invalid_argument("critical_point requires q2 != 0");
    return ext.g(static_cast<double>(q1) / static_cast<double>(q2));
}

} // namespace dualcurve
