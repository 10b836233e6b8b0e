#pragma once

#include <cstdint>
#include <vector>

#include "quadl/characters.hpp"
#include "quadl/special.hpp"

namespace quadl {

struct LValue {
    cplx s;
    cplx lambda;        // completed L-function
    double lambda_err;  // absolute error bound on lambda
    cplx l;             // L(s, chi_d); NaN when s is at the gamma-factor pole
    double err_est;     // absolute error bound on l
};

/// A real number together with an absolute error estimate.
struct Estimate {
    double value;
    double err;
};

struct CEstimate {
    cplx value;
    double err;
};

struct EngineOptions {
    double eps_target = 1e-15;
    double near_zero_floor = 1e-12;
    std::uint64_t max_terms = 50'000'000;
};

/// Evaluator for L(s, chi_d) and its completion through the smoothed (incomplete-gamma)
/// expansion  Lambda(s) = sum chi(n) [H(s/2, x_n) + H((1-s)/2, x_n)],  x_n = pi n^2 / d.
///
/// Working region: -1/2 <= Re s <= 5/2, |Im s| <= 60. Immutable after construction.
class LEngine {
public:
    static constexpr double kMinRe = -0.5;
    static constexpr double kMaxRe = 2.5;
    static constexpr double kMaxIm = 60.0;
    static constexpr double kComplexStep = 1e-20;

    explicit LEngine(Discriminant d, EngineOptions opt = {});

    const Discriminant& discriminant() const noexcept { return disc_; }
    std::uint64_t d() const noexcept { return disc_.d; }
    std::uint64_t n_trunc() const noexcept { return n_trunc_; }
    const EngineOptions& options() const noexcept { return opt_; }

    /// Lambda(s) and L(s). L is left as NaN at the pole s = 0 of the gamma factor.
    LValue evaluate(cplx s) const;

    LValue completed_lambda(cplx s) const { return evaluate(s); }

    /// L(s, chi_d); throws ConditioningError within 1e-6 of s = 0.
    CEstimate l_value(cplx s) const;

    /// L'(sigma) for real sigma by complex-step differentiation.
    Estimate l_prime(double sigma) const;

    /// Lambda'(sigma) for real sigma by complex-step differentiation.
    Estimate lambda_prime(double sigma) const;

    /// L'(s) for complex s from a Cauchy integral on a small circle.
    CEstimate l_prime(cplx s) const;

    /// -L'/L(s); throws NearZeroError when |L(s)| is below the conditioning floor.
    CEstimate log_deriv(cplx s) const;

    /// Same as log_deriv for real s, returned as a real estimate.
    Estimate log_deriv(double sigma) const;

    /// (d/pi)^{s/2} Gamma(s/2).
    cplx gamma_factor(cplx s) const;

private:
    struct Sum {
        cplx value;
        double mag_re;  // sum of |Re| of terms
        double mag_im;  // sum of |Im| of terms
        double tail;
    };
    Sum afe_sum(cplx s) const;
    void check_domain(cplx s) const;

    Discriminant disc_;
    EngineOptions opt_;
    std::uint64_t n_trunc_;
    double log_d_over_pi_;
    std::vector<double> x_;       // pi n^2 / d for n with chi(n) != 0
    std::vector<double> chi_;     // matching chi(n)
    std::vector<double> log_x_;
    std::vector<double> exp_x_;
};

/// Independent reference: L(s) = d^{-s} sum_a chi(a) zeta(s, a/d) with Euler-Maclaurin
/// Hurwitz zeta. Cost O(d); throws ResourceError above cap.
cplx euler_maclaurin_oracle(std::uint64_t d, cplx s, std::uint64_t cap = 10'000);

}  // namespace quadl
