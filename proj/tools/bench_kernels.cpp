// Compares the OpenMP kernels against their serial references and reports
// speedups. The parallel results are bit-identical to the serial ones by
// construction (fixed-order merges), which the test suite asserts; this tool
// is about throughput.

#include <omp.h>

#include <cstdio>
#include <string>

#include "dualcurve/approx.hpp"
#include "dualcurve/counting.hpp"
#include "dualcurve/curve.hpp"
#include "dualcurve/ledger.hpp"

using namespace dualcurve;

namespace {

struct Timed {
    double seconds;
};

template <class Fn>
Timed time_it(Fn&& fn) {
    double t0 = omp_get_wtime();
    fn();
    return {omp_get_wtime() - t0};
}

void row(const std::string& name, const std::string& size, Timed serial, Timed parallel) {
    std::printf("%-28s %-22s %9.3fs %9.3fs %7.2fx\n", name.c_str(), size.c_str(),
                serial.seconds, parallel.seconds, serial.seconds / parallel.seconds);
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %-22s %10s %10s %8s\n", "kernel", "size", "serial", "parallel", "speedup");

    {
        CountQuery q;
        q.phi = PhiSpec::poly_from_doubles({0.0, 0.0, 1.0});
        q.gamma = Interval(0.0, 1.0);
        q.R = 1 << 11;
        q.delta = 1.0 / 64.0;
        CountRecord a, b;
        Timed ts = time_it([&] { a = count_near_serial(q); });
        Timed tp = time_it([&] { b = count_near(q); });
        row("count_near (exact)", "R=2^11, delta=2^-6", ts, tp);
        if (a.count != b.count) std::printf("  MISMATCH: %lld vs %lld\n", a.count, b.count);
    }
    {
        CountQuery q;
        q.phi = PhiSpec::poly_from_doubles({0.0, 0.0, 1.0});
        q.gamma = Interval(0.0, 1.0);
        q.R = 1 << 11;
        q.delta = 1.0 / 64.0;
        q.lambda = 0.5;
        CountRecord a, b;
        Timed ts = time_it([&] { a = weighted_sum_serial(q); });
        Timed tp = time_it([&] { b = weighted_sum(q); });
        row("weighted_sum (exact)", "R=2^11, delta=2^-6", ts, tp);
        if (*a.weighted != *b.weighted) std::printf("  MISMATCH in weighted sums\n");
    }
    {
        ExtendedCurve ext = extend(builtin_curve("parabola", Interval(0.0, 1.0)));
        ApproxFunction psi = ApproxFunction::power(3.0);
        BlockLedger a, b;
        Timed ts = time_it([&] { a = cover_sum_by_case_serial(ext, psi, 0.9, 0, 8, 1LL << 40); });
        Timed tp = time_it([&] { b = cover_sum_by_case(ext, psi, 0.9, 0, 8, 1LL << 40); });
        row("cover_sum_by_case", "parabola, k=0..8", ts, tp);
        for (size_t i = 0; i < a.blocks.size(); ++i)
            for (int c = 0; c < 4; ++c)
                if (a.blocks[i].cost[c] != b.blocks[i].cost[c])
                    std::printf("  MISMATCH in block %zu bucket %d\n", i, c);
    }
    {
        ExtendedCurve ext = extend(builtin_curve("parabola", Interval(0.0, 1.0)));
        ApproxFunction psi = ApproxFunction::power(3.0);
        EnvelopeScan a, b;
        Timed ts = time_it([&] { a = scan_envelope_violations_serial(ext, psi, 1, 256); });
        Timed tp = time_it([&] { b = scan_envelope_violations(ext, psi, 1, 256); });
        row("envelope scan", "parabola, q<=256", ts, tp);
        if (a.violations != b.violations || a.triples != b.triples)
            std::printf("  MISMATCH in scan tallies\n");
    }
    return 0;
}
