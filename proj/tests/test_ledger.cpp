#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dualcurve/approx.hpp"
#include "dualcurve/curve.hpp"
#include "dualcurve/errors.hpp"
#include "dualcurve/ledger.hpp"
#include "dualcurve/util.hpp"

using namespace dualcurve;

namespace {
ExtendedCurve parabola01() { return extend(builtin_curve("parabola", Interval(0.0, 1.0))); }
}

TEST_CASE("series partial sums") {
    ApproxFunction p3 = ApproxFunction::power(3.0);
    double s10 = series_partial(p3, 1.0, 10); // sum of q^-2
    CHECK(s10 == doctest::Approx(1.549768).epsilon(1e-6));
    // classical tail toward pi^2/6
    double s4000 = series_partial(p3, 1.0, 4000);
    CHECK(s4000 > 1.6446);
    CHECK(s4000 < M_PI * M_PI / 6.0);

    ApproxFunction one = ApproxFunction::table({1.0});
    CHECK(series_partial(one, 1.0, 3) == doctest::Approx(6.0).epsilon(1e-15));

    CHECK_THROWS_AS(series_partial(p3, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(series_partial(p3, 1.2, 5), std::invalid_argument);
    CHECK_THROWS_AS(series_partial(p3, 0.5, 0), std::invalid_argument);

    // nondecreasing in Q
    double prev = 0;
    for (long long Q : {1LL, 3LL, 10LL, 50LL}) {
        double v = series_partial(p3, 0.8, Q);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("dyadic increments of the series approach 2^(3 - s(nu+1))") {
    for (double nu : {3.0, 4.0}) {
        for (double s : {0.8, 1.0}) {
            ApproxFunction psi = ApproxFunction::power(nu);
            std::vector<double> inc;
            double prev_total = 0.0;
            for (int k = 0; k <= 12; ++k) {
                double total = series_partial(psi, s, (1LL << (k + 1)) - 1);
                inc.push_back(total - prev_total);
                prev_total = total;
            }
            double predicted = std::pow(2.0, 3.0 - s * (nu + 1.0));
            for (int k = 6; k < 12; ++k) {
                double ratio = inc[k + 1] / inc[k];
                CHECK(std::abs(ratio - predicted) <= 0.05 * predicted);
            }
        }
    }
}

TEST_CASE("psi_hat truncation") {
    ApproxFunction p10 = ApproxFunction::power(10.0);
    ApproxFunction hat = psi_hat(p10, 1.0, 0.1);
    for (long long q : {2LL, 5LL, 100LL})
        CHECK(hat(q) == doctest::Approx(std::pow(q, -2.1)).epsilon(1e-14));
    CHECK(hat(1) == 1.0);

    ApproxFunction p1 = ApproxFunction::power(1.0);
    ApproxFunction hat1 = psi_hat(p1, 1.0, 0.1);
    for (long long q : {1LL, 7LL, 1000LL}) CHECK(hat1(q) == p1(q));

    // pointwise max, monotone, dominating
    for (long long q = 1; q <= 4096; q *= 2) {
        CHECK(hat(q) == std::max(p10(q), std::pow(static_cast<double>(q), 1.0 - 3.1 / 1.0)));
        CHECK(hat(q) >= p10(q));
        if (q > 1) CHECK(hat(q) <= hat(q / 2));
    }

    // truncation keeps the series within a bounded excess when s(nu+1) > 3+eps0
    ApproxFunction p5 = ApproxFunction::power(5.0);
    ApproxFunction hat5 = psi_hat(p5, 0.9, 0.1);
    double excess_small = series_partial(hat5, 0.9, 1000) - series_partial(p5, 0.9, 1000);
    double excess_big = series_partial(hat5, 0.9, 100000) - series_partial(p5, 0.9, 100000);
    CHECK(excess_big <= excess_small * 1.2 + 1.0);

    CHECK_THROWS_AS(psi_hat(p10, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(psi_hat(p10, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("critical exponent") {
    CHECK(critical_exponent(3.0) == 0.75);
    CHECK(critical_exponent(5.0) == 0.5);
    CHECK(critical_exponent(2.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(critical_exponent(2.0), std::invalid_argument);
    CHECK_THROWS_AS(critical_exponent(1.5), std::invalid_argument);
}

TEST_CASE("block ledger: finiteness, bucket split, bounds") {
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::power(3.0);
    BlockLedger led = cover_sum_by_case(ext, psi, 0.9, 0, 5, 1LL << 40);
    REQUIRE(led.blocks.size() == 6);
    CHECK(led.q0 == 2);
    CHECK(led.K > 0.0);
    for (const BlockRecord& b : led.blocks) {
        double total = 0;
        for (int c = 0; c < 4; ++c) {
            CHECK(b.cost[c] >= 0.0);
            CHECK(std::isfinite(b.cost[c]));
            total += b.cost[c];
        }
        CHECK(total > 0.0);
        CHECK(b.triples_seen > 0);
        CHECK(b.below_q0 == (b.q_lo < 2));
        if (!b.below_q0) {
            for (int c = 0; c < 4; ++c) CHECK(b.cost[c] <= b.bound[c] * (1 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("ledger completeness against brute-force enumeration") {
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::power(3.0);
    BlockLedger led = cover_sum_by_case(ext, psi, 0.9, 0, 3, 1LL << 40);

    for (const BlockRecord& b : led.blocks) {
        KahanSum brute;
        long long seen = 0;
        enumerate_nonempty(ext, psi, b.q_lo, b.q_hi,
                           [&](const DualTriple&, const IntervalSet& set) {
                               brute.add(std::pow(set.total_length, 0.9));
                               ++seen;
                           },
                           1LL << 40);
        double split_total = b.cost[0] + b.cost[1] + b.cost[2] + b.cost[3];
        CHECK(split_total == doctest::Approx(brute.get()).epsilon(1e-9));
        CHECK(seen == b.triples_seen);
    }
}

TEST_CASE("ledger tiny psi keeps every cost small") {
    ExtendedCurve ext = parabola01();
    ApproxFunction tiny = ApproxFunction::table({1e-12});
    BlockLedger led = cover_sum_by_case(ext, tiny, 0.7, 0, 2, 1LL << 40);
    for (const BlockRecord& b : led.blocks)
        CHECK(b.cost[0] + b.cost[1] + b.cost[2] + b.cost[3] < 1e-3);
}

TEST_CASE("ledger parallel matches serial bitwise") {
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::power(3.0);
    BlockLedger a = cover_sum_by_case(ext, psi, 0.8, 0, 5, 1LL << 40);
    BlockLedger b = cover_sum_by_case_serial(ext, psi, 0.8, 0, 5, 1LL << 40);
    REQUIRE(a.blocks.size() == b.blocks.size());
    for (size_t i = 0; i < a.blocks.size(); ++i)
        for (int c = 0; c < 4; ++c) {
            CHECK(a.blocks[i].cost[c] == b.blocks[i].cost[c]);
            CHECK(a.blocks[i].bound[c] == b.blocks[i].bound[c]);
        }
    CHECK(a.K == b.K);
}

TEST_CASE("ledger budget and validation") {
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::power(3.0);
    CHECK_THROWS_AS(cover_sum_by_case(ext, psi, 0.9, 0, 10, 1000), budget_error);
    CHECK_THROWS_AS(cover_sum_by_case(ext, psi, 0.0, 0, 2, 1LL << 30), std::invalid_argument);
    CHECK_THROWS_AS(cover_sum_by_case(ext, psi, 0.9, 3, 2, 1LL << 30), std::invalid_argument);
}

TEST_CASE("tail decay report") {
    BlockLedger synthetic;
    synthetic.s = 0.9;
    for (int k = 0; k < 3; ++k) {
        BlockRecord b;
        b.k = k;
        b.cost[0] = std::ldexp(1.0, -k); // 1, 1/2, 1/4
        synthetic.blocks.push_back(b);
    }
    std::vector<TailRow> rows = tail_decay_report(synthetic);
    REQUIRE(rows.size() == 3);
    CHECK(std::isnan(rows[0].ratio_to_previous));
    CHECK(rows[1].ratio_to_previous == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rows[2].ratio_to_previous == doctest::Approx(0.5).epsilon(1e-12));

    BlockLedger single;
    single.blocks.push_back(BlockRecord{});
    CHECK_THROWS_AS(tail_decay_report(single), std::invalid_argument);
}

TEST_CASE("convergence contrast at moderate heights") {
    // s above the transition decays, s below grows; visible from k = 4..6
    ExtendedCurve ext = parabola01();
    ApproxFunction psi = ApproxFunction::power(3.0);
    BlockLedger hi = cover_sum_by_case(ext, psi, 0.9, 4, 7, 1LL << 40);
    std::vector<TailRow> rows_hi = tail_decay_report(hi);
    for (size_t i = 2; i < rows_hi.size(); ++i) CHECK(rows_hi[i].ratio_to_previous < 1.0);
    BlockLedger lo = cover_sum_by_case(ext, psi, 0.6, 4, 7, 1LL << 40);
    std::vector<TailRow> rows_lo = tail_decay_report(lo);
    for (size_t i = 2; i < rows_lo.size(); ++i) CHECK(rows_lo[i].ratio_to_previous > 1.0);
}
