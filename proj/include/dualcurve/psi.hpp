#pragma once

#include <memory>
#include <string>
#include <vector>

namespace dualcurve {

// Approximation function psi: positive, monotone nonincreasing on the
// positive integers. Three shapes: power q^-nu, a finite value table with a
// constant tail, and a truncation max{psi(q), q^(1-(3+eps0)/s)}.
class ApproxFunction {
public:
    enum class Kind { power, table, truncated };

    static ApproxFunction power(double nu);
    static ApproxFunction table(std::vector<double> values);
    static ApproxFunction truncated(ApproxFunction inner, double s, double eps0);

    double operator()(long long q) const;

    Kind kind() const { return kind_; }
    // Least q with psi(q) <= 1/8. Throws std::invalid_argument when psi never
    // drops to 1/8 within the search cap (2^40).
    long long q0() const;
    bool has_q0() const { return q0_ > 0; }

    // Table metadata: size 0 unless table-backed. Queries beyond the table
    // extend by the last value; callers surface that in run metadata.
    long long table_size() const;
    double truncation_exponent() const { return trunc_expo_; }

private:
    ApproxFunction() = default;
    void compute_q0();

    Kind kind_ = Kind::power;
    double nu_ = 1.0;
    std::vector<double> values_;
    std::shared_ptr<const ApproxFunction> inner_;
    double trunc_expo_ = 0.0;
    long long q0_ = -1;
};

// Reads a two-column CSV "q,value" with q = 1..N contiguous.
ApproxFunction load_psi_table(const std::string& path);

} // namespace dualcurve
