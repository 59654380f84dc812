#include "dualcurve/interval.hpp"

#include <algorithm>

#include "dualcurve/util.hpp"

namespace dualcurve {

std::vector<Interval> merge_overlaps(std::vector<Interval> parts) {
    std::sort(parts.begin(), parts.end());
    std::vector<Interval> out;
    out.reserve(parts.size());
    for (const Interval& p : parts) {
        if (p.empty()) continue;
        if (!out.empty() && p.lo <= out.back().hi) {
            if (p.hi > out.back().hi) out.back().hi = p.hi;
        } else {
            out.push_back(p);
        }
    }
    return out;
}

double total_length(const std::vector<Interval>& parts) {
    KahanSum s;
    for (const Interval& p : parts) s.add(p.length());
    return s.get();
}

} // namespace dualcurve
