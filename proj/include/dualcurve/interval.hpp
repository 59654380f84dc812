#pragma once

#include <vector>

namespace dualcurve {

// Closed interval [lo, hi]. A default-constructed interval is the empty
// sentinel (lo > hi).
struct Interval {
    double lo = 1.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {}

    bool empty() const { return hi < lo; }
    double length() const { return empty() ? 0.0 : hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator<(const Interval& a, const Interval& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    }
};

// Sorts by (lo, hi) and fuses overlapping or touching intervals.
std::vector<Interval> merge_overlaps(std::vector<Interval> parts);

// Total length of a family of pairwise-disjoint intervals.
double total_length(const std::vector<Interval>& parts);

} // namespace dualcurve
