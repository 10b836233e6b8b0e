#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "quadl/lfunc.hpp"

namespace quadl {

/// Smoothing weight: 1 on [1, y], (log^2(y^3/n) - 2 log^2(y^2/n))/(2 log^2 y) on [y, y^2],
/// log^2(y^3/n)/(2 log^2 y) on [y^2, y^3], 0 beyond.
double weight(double y, double n);

/// Lambda(n) chi_d(n) w_y(n).
double lambda_y_d(std::uint64_t d, double y, std::uint64_t n);

/// Prime powers up to y^3 with their weighted von Mangoldt values, shared across d.
class SelbergSieve {
public:
    static constexpr double kDefaultBudget = 1e8;

    explicit SelbergSieve(double y, double budget = kDefaultBudget);

    double y() const noexcept { return y_; }
    std::size_t size() const noexcept { return n_.size(); }
    const std::vector<std::uint64_t>& n() const noexcept { return n_; }
    const std::vector<std::uint32_t>& prime_index() const noexcept { return pidx_; }
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

    /// Coefficients Lambda_{y,d}(n) aligned with n().
    std::vector<double> coefficients(std::uint64_t d) const;

    /// A_d(s) = sum_{n <= y^3} Lambda_{y,d}(n) n^{-s}.
    cplx evaluate(std::uint64_t d, cplx s) const;
    cplx evaluate(const std::vector<double>& coeffs, cplx s) const;

private:
    double y_;
    std::vector<std::uint64_t> n_;
    std::vector<std::uint32_t> pidx_;  // index into primes_
    std::vector<int> k_;
    std::vector<double> lw_;           // Lambda(n) w_y(n)
    std::vector<double> log_n_;
    std::vector<std::uint32_t> primes_;
};

/// One-shot A_d(s); builds a sieve. Throws ResourceError when y^3 exceeds the budget.
cplx dirichlet_poly_A(std::uint64_t d, double y, cplx s, double budget = SelbergSieve::kDefaultBudget);

struct SigmaOptions {
    double height_cap = 4.0;   // the region's height y^{3(b-1/2)}/log y is truncated here
    double right_edge = 1.05;  // no zeros of L to the right of 1
    double max_step = 0.1;
};

struct SigmaYD {
    std::uint64_t d = 0;
    double y = 0;
    double t = 0;
    double value = 0;
    bool attained_by_default = true;
    double height = 0;         // half-height of the certified rectangle
    bool height_capped = false;
    int rectangle_count = 0;
    std::vector<cplx> zeros;   // zeros of L inside the scanned rectangle
};

/// sigma_{y,d} = 1/2 + 2 max(beta - 1/2, 2/log y) over zeros with beta > 1/2 + 2/log y and
/// |gamma - t| <= y^{3(beta-1/2)}/log y. The region is scanned with a rectangle argument count;
/// boundary contact propagates as IndeterminateError.
SigmaYD sigma_y_d(const LEngine& engine, double y, double t = 0, const SigmaOptions& opt = {});

struct ApproxReport {
    double s = 0;
    double sigma = 0;           // sigma_{y,d}
    double L = 0;               // -L'/L(s)
    double A = 0;               // A_d(s)
    double A_at_sigma = 0;      // |A_d(sigma_{y,d})|
    double envelope = 0;        // y^{(1/2-s)/2} (|A_d(sigma)| + log d)
    double diff = 0;            // |L - A|
    double ratio = 0;
};

/// Compares -L'/L(s) with A_d(s) for real s >= sigma_{y,d}.
ApproxReport approx_check(const LEngine& engine, const SelbergSieve& sieve, const SigmaYD& sigma, double s);

}  // namespace quadl
