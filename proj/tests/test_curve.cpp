#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"

using namespace dualcurve;

namespace {

const double kE = std::exp(1.0);

ExtendedCurve parabola01() { return extend(builtin_curve("parabola", Interval(0.0, 1.0))); }
ExtendedCurve expo01() { return extend(builtin_curve("exponential", Interval(0.0, 1.0))); }

// independent root oracle: plain bisection of f1ext(x) + y on a wide bracket
double bisect_g(const ExtendedCurve& ext, double y) {
    double lo = -1e6, hi = 1e6;
    auto h = [&](double x) { return ext.f1ext(x) + y; };
    bool rising = h(hi) > h(lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((h(mid) > 0) == rising)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("builtin certificates and constants") {
    PlanarCurve par = builtin_curve("parabola", Interval(0.0, 1.0));
    CHECK(par.c1 == 2.0);
    CHECK(par.c2 == 2.0);
    CHECK(par.sign == 1);
    CurveConstants pk = curve_constants(par);
    CHECK(pk.M == 3.0);
    CHECK(pk.C == 3.0);

    PlanarCurve ex = builtin_curve("exponential", Interval(0.0, 1.0));
    CHECK(ex.c1 == 1.0);
    CHECK(ex.c2 == doctest::Approx(kE).epsilon(1e-15));
    CurveConstants ek = curve_constants(ex);
    CHECK(ek.M == doctest::Approx(1.0 + kE).epsilon(1e-15));
    CHECK(ek.C == doctest::Approx(2.0 + kE).epsilon(1e-15));

    PlanarCurve arc = builtin_curve("circle_arc", Interval(-0.5, 0.5));
    CHECK(arc.sign == -1);
    CHECK(arc.c1 == doctest::Approx(1.0));
    CHECK(arc.c2 == doctest::Approx(std::pow(0.75, -1.5)));
    // the interior maximum of |x| + f(x) + 1 lands inside this domain
    PlanarCurve arc2 = builtin_curve("circle_arc", Interval(-0.8, 0.8));
    CHECK(curve_constants(arc2).C == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("builtin error paths") {
    CHECK_THROWS_AS(builtin_curve("witch_of_agnesi", Interval(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(builtin_curve("parabola", Interval(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(builtin_curve("circle_arc", Interval(0.0, 0.95)), std::invalid_argument);
}

TEST_CASE("derivative evaluators agree with finite differences") {
    for (const char* name : {"parabola", "exponential", "circle_arc"}) {
        Interval dom = std::string(name) == "circle_arc" ? Interval(-0.6, 0.6) : Interval(0.0, 1.0);
        PlanarCurve c = builtin_curve(name, dom);
        double h = 1e-6 * dom.length();
        for (int i = 1; i < 40; ++i) {
            double x = dom.lo + dom.length() * i / 40.0;
            double fd1 = (c.f(x + h) - c.f(x - h)) / (2 * h);
            CHECK(std::abs(fd1 - c.f1(x)) <= 1e-6 * (1.0 + std::abs(c.f1(x))));
            double fd2 = (c.f1(x + h) - c.f1(x - h)) / (2 * h);
            CHECK(std::abs(fd2 - c.f2(x)) <= 1e-6 * (1.0 + std::abs(c.f2(x))));
            CHECK(c.c1 <= std::abs(c.f2(x)) + 1e-12);
            CHECK(std::abs(c.f2(x)) <= c.c2 + 1e-12);
            CHECK((c.f2(x) > 0 ? 1 : -1) == c.sign);
        }
    }
}

TEST_CASE("custom curve certification") {
    auto f = [](double x) { return x * x * x + 3.0 * x; };   // f'' = 6x
    auto f1 = [](double x) { return 3.0 * x * x + 3.0; };
    auto f2 = [](double x) { return 6.0 * x; };
    PlanarCurve c = make_custom_curve(f, f1, f2, Interval(1.0, 2.0), 512);
    CHECK(c.sign == 1);
    CHECK(c.c1 <= 6.0);
    CHECK(c.c1 >= 6.0 * 0.98);
    CHECK(c.c2 >= 12.0);
    CHECK(c.c2 <= 12.0 * 1.02);
    // f'' changes sign across zero
    CHECK_THROWS_AS(make_custom_curve(f, f1, f2, Interval(-1.0, 1.0), 512), std::invalid_argument);
    // wrong derivative is caught
    auto bad1 = [](double x) { return 3.0 * x * x; };
    CHECK_THROWS_AS(make_custom_curve(f, bad1, f2, Interval(1.0, 2.0), 512), std::invalid_argument);
}

TEST_CASE("taylor extension values and smoothness") {
    ExtendedCurve par = parabola01();
    // quadratic Taylor reproduces the parabola everywhere
    for (double x : {-3.0, -0.5, 0.3, 1.7, 9.0}) {
        CHECK(par.fext(x) == doctest::Approx(x * x).epsilon(1e-15));
        CHECK(par.f1ext(x) == doctest::Approx(2 * x).epsilon(1e-15));
        CHECK(par.f2ext(x) == 2.0);
    }

    ExtendedCurve ex = expo01();
    CHECK(ex.fext(2.0) == doctest::Approx(2.5 * kE).epsilon(1e-13));
    // continuity of value and first derivative at both seams
    for (double edge : {0.0, 1.0}) {
        double h = 1e-9;
        CHECK(std::abs(ex.fext(edge - h) - ex.fext(edge + h)) <= 1e-8);
        CHECK(std::abs(ex.f1ext(edge - h) - ex.f1ext(edge + h)) <= 1e-8);
    }
    // certificate survives the extension
    for (double x = -8.0; x <= 8.0; x += 0.37) {
        double d2 = std::abs(ex.f2ext(x));
        CHECK(d2 >= ex.base().c1 - 1e-12);
        CHECK(d2 <= ex.base().c2 + 1e-12);
    }
}

TEST_CASE("slope inverse") {
    ExtendedCurve par = parabola01();
    CHECK(par.g(1.0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(par.g(-3.0) == doctest::Approx(1.5).epsilon(1e-14));

    ExtendedCurve ex = expo01();
    CHECK(ex.g(-kE) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ex.g(-1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ex.g(-1.0) == doctest::Approx(bisect_g(ex, -1.0)).epsilon(1e-10));

    // residual contract across a y sweep, all three curves
    ExtendedCurve arc = extend(builtin_curve("circle_arc", Interval(-0.6, 0.6)));
    for (const ExtendedCurve* e : {&par, &ex, &arc}) {
        for (double y = -20.0; y <= 20.0; y += 0.173) {
            double x = e->g(y);
            CHECK(std::abs(e->f1ext(x) + y) <= 1e-12 * (1.0 + std::abs(y)));
        }
    }
}

TEST_CASE("g is monotone with slope in [1/c2, 1/c1], direction -sign(f'')") {
    for (const char* name : {"parabola", "exponential", "circle_arc"}) {
        Interval dom = std::string(name) == "circle_arc" ? Interval(-0.6, 0.6) : Interval(0.0, 1.0);
        ExtendedCurve e = extend(builtin_curve(name, dom));
        double c1 = e.base().c1, c2 = e.base().c2;
        double prev = e.g(-10.0);
        for (double y = -10.0 + 0.25; y <= 10.0; y += 0.25) {
            double cur = e.g(y);
            double slope = (cur - prev) / 0.25;
            CHECK((slope < 0) == (e.base().sign > 0));
            CHECK(std::abs(slope) >= 1.0 / c2 - 1e-6);
            CHECK(std::abs(slope) <= 1.0 / c1 + 1e-6);
            prev = cur;
        }
        CHECK(e.Iprime().length() <= 4.0 * e.constants().M / c1 + 1e-9);
    }
}

TEST_CASE("critical points") {
    ExtendedCurve par = parabola01();
    CHECK(critical_point(par, 1, -2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(critical_point(par, 3, 2) == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(critical_point(par, 0, 5) == 0.0);
    CHECK_THROWS_AS(critical_point(par, 1, 0), std::invalid_argument);
    // residual form of the defining equation
    ExtendedCurve ex = expo01();
    for (long long q2 : {-7LL, 2LL, 31LL}) {
        for (long long q1 : {-5LL, 0LL, 9LL}) {
            double x0 = critical_point(ex, q1, q2);
            CHECK(std::abs(q1 + q2 * ex.f1ext(x0)) <= 1e-9 * std::abs(static_cast<double>(q2)));
        }
    }
}

TEST_CASE("F evaluation") {
    ExtendedCurve par = parabola01();
    CHECK(F_eval(par, -1, 1, 0.5) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(F_eval(par, 3, 2, -0.75) == doctest::Approx(-1.125).epsilon(1e-15));
    CHECK(F_eval(par, 0, 0, 0.3) == 0.0);
}

TEST_CASE("dual curve") {
    ExtendedCurve par = parabola01();
    CHECK(dual_eval(par, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));  // f*(y) = -y^2/4
    CHECK(dual_eval(par, 0.0) == 0.0);
    CHECK(2.0 * dual_eval(par, 1.5) == doctest::Approx(-1.125).epsilon(1e-14));
    CHECK(2.0 * dual_eval(par, 1.5) ==
          doctest::Approx(F_eval(par, 3, 2, critical_point(par, 3, 2))).epsilon(1e-12));

    // derivative of f* is g
    ExtendedCurve ex = expo01();
    for (double y : {-4.0, -1.1, 0.7, 3.9}) {
        double h = 1e-6;
        double fd = (ex.fstar(y + h) - ex.fstar(y - h)) / (2 * h);
        CHECK(std::abs(fd - ex.g(y)) <= 1e-5 * (1.0 + std::abs(ex.g(y))));
    }
}

TEST_CASE("duality identity on random theta2 pairs") {
    std::mt19937_64 rng(17);
    for (const ExtendedCurve& e : {parabola01(), expo01()}) {
        double M = e.constants().M;
        for (int i = 0; i < 2000; ++i) {
            long long q2 = 1 + static_cast<long long>(rng() % 400);
            long long span = static_cast<long long>(std::floor(2.0 * M * q2));
            long long q1 = static_cast<long long>(rng() % (2 * span + 1)) - span;
            double lhs = q2 * e.fstar(static_cast<double>(q1) / q2);
            double rhs = F_eval(e, q1, q2, critical_point(e, q1, q2));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(static_cast<double>(q2))));
        }
    }
}

TEST_CASE("curvature band of |F'| around the critical point") {
    std::mt19937_64 rng(99);
    ExtendedCurve par = parabola01();
    for (int i = 0; i < 2000; ++i) {
        long long q2 = 1 + static_cast<long long>(rng() % 200);
        long long span = static_cast<long long>(std::floor(6.0 * q2));
        long long q1 = static_cast<long long>(rng() % (2 * span + 1)) - span;
        double x0 = critical_point(par, q1, q2);
        double fx0 = F_eval(par, q1, q2, x0);
        double x = static_cast<double>(rng() % 10000) / 10000.0;
        double num = std::abs(F_eval(par, q1, q2, x) - fx0);
        if (num < 1e-4 * (1.0 + std::abs(fx0))) continue; // 0/0 at the critical point
        double ratio = std::abs(q1 + 2.0 * q2 * x) / std::sqrt(std::abs(q2) * num);
        CHECK(ratio == doctest::Approx(2.0).epsilon(1e-9));
    }
}
