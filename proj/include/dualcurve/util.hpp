#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace dualcurve {

// Neumaier compensated accumulator. Used wherever a sum feeds a reproducible
// output file or a tolerance-checked comparison.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double get() const { return sum + comp; }
};

// Shortest round-trip decimal form; locale-free, so output files are
// byte-stable across runs and machines.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline long long pow2ll(int k) { return 1LL << k; }

} // namespace dualcurve
