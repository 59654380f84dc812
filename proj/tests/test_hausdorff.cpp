#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"
#include "dualcurve/errors.hpp"
#include "dualcurve/hausdorff.hpp"
#include "dualcurve/interval.hpp"

using namespace dualcurve;

namespace {
ExtendedCurve parabola01() { return extend(builtin_curve("parabola", Interval(0.0, 1.0))); }
constexpr long long kBig = 1LL << 40;
}

TEST_CASE("interval merging") {
    std::vector<Interval> v = {{0.5, 0.7}, {0.0, 0.2}, {0.1, 0.3}, {0.3, 0.4}, {0.9, 0.9}};
    std::vector<Interval> m = merge_overlaps(v);
    REQUIRE(m.size() == 3);
    CHECK(m[0] == Interval(0.0, 0.4)); // touching intervals fuse
    CHECK(m[1] == Interval(0.5, 0.7));
    CHECK(m[2] == Interval(0.9, 0.9));
    CHECK(total_length(m) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("hs_cost worked examples") {
    CoverEstimate a = hs_cost({{0.0, 1.0}}, 1.0, 0.1);
    CHECK(a.cost == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.interval_count == 10);

    CoverEstimate b = hs_cost({{0.0, 1.0}}, 0.5, 0.25);
    CHECK(b.cost == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(b.interval_count == 4);

    CoverEstimate c = hs_cost({}, 0.5, 0.25);
    CHECK(c.cost == 0.0);
    CHECK(c.interval_count == 0);

    CHECK_THROWS_AS(hs_cost({{0.0, 1.0}}, 1.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(hs_cost({{0.0, 1.0}}, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("refinement only raises the s-cost") {
    // splitting L into m parts turns L^s into m^(1-s) L^s >= L^s
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        double len = 1e-4 + static_cast<double>(rng() % 1000) / 1000.0;
        double s = 0.05 + 0.95 * static_cast<double>(rng() % 1000) / 1000.0;
        double rho1 = len / (1 + static_cast<double>(rng() % 7));
        double rho2 = rho1 / (1 + static_cast<double>(rng() % 7));
        double c1 = hs_cost({{0.0, len}}, s, rho1).cost;
        double c2 = hs_cost({{0.0, len}}, s, rho2).cost;
        CHECK(c2 >= c1 - 1e-12);
        CHECK(c1 >= std::pow(len, s) - 1e-12);
    }
}

TEST_CASE("hs_cost at s=1 equals the merged length") {
    std::mt19937_64 rng(11);
    std::vector<Interval> cover;
    for (int i = 0; i < 300; ++i) {
        double lo = static_cast<double>(rng() % 100000) / 100000.0;
        double hi = lo + static_cast<double>(rng() % 3000) / 100000.0;
        cover.push_back({lo, hi});
    }
    double merged_len = total_length(merge_overlaps(cover));
    CoverEstimate est = hs_cost(cover, 1.0, 0.01);
    CHECK(est.cost == doctest::Approx(merged_len).epsilon(1e-9));
}

TEST_CASE("build_tail_cover at Q=1 reproduces the known mu parts") {
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::table({0.01});
    std::vector<Interval> cover = build_tail_cover(ext, psi, 1, 1, kBig, kBig);
    REQUIRE(!cover.empty());
    // sorted, exact-duplicate free
    for (size_t i = 1; i < cover.size(); ++i) {
        CHECK(!(cover[i] < cover[i - 1]));
        CHECK(!(cover[i] == cover[i - 1]));
    }
    bool has_01 = false, has_low = false, has_high = false;
    for (const Interval& iv : cover) {
        if (iv.lo == 0.0 && std::abs(iv.hi - 0.1) < 1e-12) has_01 = true;
        if (iv.lo == 0.0 && std::abs(iv.hi - 0.0101020514) < 1e-9) has_low = true;
        if (std::abs(iv.lo - 0.9898979489) < 1e-9 && iv.hi == 1.0) has_high = true;
    }
    CHECK(has_01);
    CHECK(has_low);
    CHECK(has_high);

    // every solve_mu part of every nonempty triple appears in the cover
    enumerate_nonempty(ext, psi, 1, 1, [&](const DualTriple&, const IntervalSet& set) {
        for (const Interval& part : set.parts) {
            bool found = false;
            for (const Interval& iv : cover)
                if (iv == part) found = true;
            CHECK(found);
        }
    }, kBig);

    CHECK_THROWS_AS(build_tail_cover(ext, psi, 3, 2, kBig, kBig), std::invalid_argument);
    CHECK_THROWS_AS(build_tail_cover(ext, psi, 1, 400, 1000, kBig), budget_error);
    CHECK_THROWS_AS(build_tail_cover(ext, psi, 1, 64, kBig, 10), budget_error);
}

TEST_CASE("cover correctness by rejection sampling") {
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::power(3.0);
    std::vector<Interval> cover = build_tail_cover(ext, psi, 4, 8, kBig, kBig);
    std::vector<Interval> merged = merge_overlaps(cover);
    std::mt19937_64 rng(23);
    // points sampled inside cover parts stay inside the merged refinement
    for (int i = 0; i < 10000; ++i) {
        const Interval& iv = cover[rng() % cover.size()];
        double x = iv.lo + (iv.hi - iv.lo) * (static_cast<double>(rng() % 10007) / 10007.0);
        bool inside = false;
        for (const Interval& m : merged)
            if (m.contains(x)) { inside = true; break; }
        CHECK(inside);
    }
    // and every sampled point is psi-approximable by some triple of the range
    for (int i = 0; i < 200; ++i) {
        const Interval& iv = cover[rng() % cover.size()];
        double x = 0.5 * (iv.lo + iv.hi);
        bool witnessed = false;
        for (long long q = 4; q <= 8 && !witnessed; ++q) {
            double pq = psi(q);
            for (long long q1 = -q; q1 <= q && !witnessed; ++q1)
                for (long long q2 = -q; q2 <= q && !witnessed; ++q2) {
                    if (std::max(std::llabs(q1), std::llabs(q2)) != q) continue;
                    double F = F_eval(ext, q1, q2, x);
                    if (std::abs(F - std::round(F)) < pq + 1e-12) witnessed = true;
                }
        }
        CHECK(witnessed);
    }
}

TEST_CASE("dimension scan brackets the transition for nu = 3") {
    ExtendedCurve ext = parabola01();
    DimScanResult res = dimension_scan(ext, 3.0, {0.55, 0.65, 0.75, 0.85, 0.95},
                                       {3, 4, 5, 6}, 0.95, kBig, kBig);
    REQUIRE(res.bracketed);
    CHECK(res.s_hat >= 0.6);
    CHECK(res.s_hat <= 0.9);
    CHECK(res.rows.size() == 20);
    // s = 0.95 row: cost stays bounded by the domain length after merging
    for (const DimScanRow& r : res.rows)
        if (r.s == 0.95 && r.k == 3) CHECK(r.cost < 10.0);
}

TEST_CASE("dimension scan validation and unbracketed report") {
    ExtendedCurve ext = parabola01();
    CHECK_THROWS_AS(dimension_scan(ext, 2.0, {0.5}, {3, 4}, 0.95, kBig, kBig),
                    std::invalid_argument);
    CHECK_THROWS_AS(dimension_scan(ext, 3.0, {}, {3, 4}, 0.95, kBig, kBig),
                    std::invalid_argument);
    CHECK_THROWS_AS(dimension_scan(ext, 3.0, {0.5}, {3}, 0.95, kBig, kBig),
                    std::invalid_argument);
    // a grid entirely above the transition cannot bracket it
    DimScanResult res = dimension_scan(ext, 5.0, {0.8, 0.9, 1.0}, {3, 4, 5}, 0.95, kBig, kBig);
    CHECK(!res.bracketed);
    CHECK(std::isnan(res.s_hat));
    CHECK(!res.note.empty());
}
