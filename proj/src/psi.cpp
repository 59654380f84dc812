#include "dualcurve/psi.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dualcurve/errors.hpp"

namespace dualcurve {

namespace {
constexpr long long kQ0Cap = 1LL << 40;
}

ApproxFunction ApproxFunction::power(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("power psi requires nu > 0");
    ApproxFunction f;
    f.kind_ = Kind::power;
    f.nu_ = nu;
    f.compute_q0();
    return f;
}

ApproxFunction ApproxFunction::table(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("table psi requires at least one value");
    for (size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw std::invalid_argument("table psi must be positive (index " + std::to_string(i + 1) + ")");
        if (i > 0 && values[i] > values[i - 1])
            throw std::invalid_argument("table psi must be nonincreasing (index " + std::to_string(i + 1) + ")");
    }
    ApproxFunction f;
    f.kind_ = Kind::table;
    f.values_ = std::move(values);
    f.compute_q0();
    return f;
}

ApproxFunction ApproxFunction::truncated(ApproxFunction inner, double s, double eps0) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("truncation requires s in (0, 1]");
    if (!(eps0 > 0.0)) throw std::invalid_argument("truncation requires eps0 > 0");
    ApproxFunction f;
    f.kind_ = Kind::truncated;
    f.inner_ = std::make_shared<const ApproxFunction>(std::move(inner));
    f.trunc_expo_ = 1.0 - (3.0 + eps0) / s;
    f.compute_q0();
    return f;
}

double ApproxFunction::operator()(long long q) const {
    if (q < 1) throw std::invalid_argument("psi is defined on positive integers");
    switch (kind_) {
    case Kind::power:
        return std::pow(static_cast<double>(q), -nu_);
    case Kind::table: {
        size_t i = static_cast<size_t>(q) - 1;
        return i < values_.size() ? values_[i] : values_.back();
    }
    case Kind::truncated:
        return std::max((*inner_)(q), std::pow(static_cast<double>(q), trunc_expo_));
    }
    return 0.0; // unreachable
}

void ApproxFunction::compute_q0() {
    const ApproxFunction& psi = *this;
    if (psi(kQ0Cap) > 0.125) { q0_ = -1; return; }
    long long lo = 1, hi = kQ0Cap; // psi(hi) <= 1/8
    if (psi(1) <= 0.125) { q0_ = 1; return; }
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        (psi(mid) <= 0.125 ? hi : lo) = mid;
    }
    q0_ = hi;
}

long long ApproxFunction::q0() const {
    if (q0_ < 0)
        throw std::invalid_argument("psi never reaches 1/8: q0 is undefined");
    return q0_;
}

long long ApproxFunction::table_size() const {
    if (kind_ == Kind::table) return static_cast<long long>(values_.size());
    if (kind_ == Kind::truncated) return inner_->table_size();
    return 0;
}

ApproxFunction load_psi_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open psi table: " + path);
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string qs, vs;
        if (!std::getline(ss, qs, ',') || !std::getline(ss, vs))
            throw config_error("psi table row must be 'q,value'", lineno);
        long long q = 0;
        double v = 0;
        try {
            q = std::stoll(qs);
            v = std::stod(vs);
        } catch (const std::exception&) {
            throw config_error("psi table row must be numeric 'q,value'", lineno);
        }
        if (q != static_cast<long long>(values.size()) + 1)
            throw config_error("psi table rows must run q = 1..N contiguously", lineno);
        values.push_back(v);
    }
    return ApproxFunction::table(std::move(values));
}

} // namespace dualcurve
