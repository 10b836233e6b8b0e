#pragma once

#include <complex>

namespace quadl {

using cplx = std::complex<double>;

/// e^w - 1 without cancellation in either component.
cplx expm1(cplx w);

/// (e^w - 1)/w, continuous at w = 0.
cplx expm1_ratio(cplx w);

/// log Gamma(z) on the principal branch (continuous from the positive axis).
/// Stirling series after an upward shift; z must not be a nonpositive integer.
cplx log_gamma(cplx z);

cplx gamma(cplx z);

/// (Gamma(1 + a) - 1)/a, analytic through a = 0.
cplx gamma1pm1_ratio(cplx a);

/// Upper incomplete gamma Gamma(a, x) for complex a and real x > 0.
cplx upper_gamma(cplx a, double x);

/// x^{-a} Gamma(a, x) = integral_1^inf t^{a-1} e^{-xt} dt, the building block of the
/// smoothed L-function expansion.
cplx scaled_upper_gamma(cplx a, double x);

/// scaled_upper_gamma for one fixed a at many x; the a-dependent constants are computed once.
class ScaledUpperGamma {
public:
    explicit ScaledUpperGamma(cplx a);
    cplx operator()(double x) const;
    /// Caller supplies log(x) and exp(-x).
    cplx operator()(double x, double log_x, double exp_minus_x) const;

private:
    cplx a_;
    cplx g1_;
};

/// Bound on |scaled_upper_gamma(a, x)| using only Re a and x (needs x > max(Re a - 1, 0)).
double scaled_upper_gamma_bound(double re_a, double x);

double digamma(double x);

/// zeta(s, a) - 1/(s - 1) by Euler-Maclaurin; finite at s = 1. Requires 0 < a <= 1.
cplx hurwitz_zeta_regular(cplx s, double a);

/// Hurwitz zeta; s != 1.
cplx hurwitz_zeta(cplx s, double a);

}  // namespace quadl
