#pragma once

#include <cstdint>
#include <vector>

#include "quadl/characters.hpp"

namespace quadl {

struct FeketeValue {
    double value;
    double err;
};

/// F_d(t) = sum_{n=1}^{d-1} chi_d(n) t^n by compensated Horner.
FeketeValue fekete_eval(const CharTable& chi, double t);
FeketeValue fekete_eval(std::uint64_t d, double t);

/// Same polynomial summed in increasing powers with Neumaier compensation.
FeketeValue fekete_eval_ascending(const CharTable& chi, double t);

/// Evaluation points in (0, 1): half uniform on (0, 1/2], half geometric towards 1 down to
/// 1 - t ~ 2^{-(log2 d + 4)}. The grid for 2n points contains the grid for n points.
std::vector<double> fekete_grid(std::uint64_t d, std::size_t points);

struct FeketeSignChange {
    double lo, hi;
};

struct FeketeZeroReport {
    std::uint64_t d = 0;
    std::size_t grid_points = 0;
    int count = 0;                   // certified sign changes, a lower bound on zeros in (0, 1)
    bool lower_bound_only = true;
    std::vector<FeketeSignChange> zeros;
    std::vector<double> suspects;    // grid points where |F_d| is within its error bound
};

/// Certified sign changes of F_d on (0, 1), each refined by bisection to refine_tol.
/// points = 0 selects 16 d.
FeketeZeroReport fekete_real_zeros(std::uint64_t d, std::size_t points = 0, double refine_tol = 1e-12);

struct MellinResidual {
    double s = 0;
    double lhs1 = 0, rhs1 = 0, residual1 = 0;  // L(s) Gamma(s) against the F_d integral
    double lhs2 = 0, rhs2 = 0, residual2 = 0;  // Gamma(s)(L'(s) + L(s) psi(s)) against the log-weighted integral
    double quad_err1 = 0, quad_err2 = 0;
};

/// Checks both Mellin identities for F_d at real s in (0, 1], using u = e^{-v} and
/// double-exponential quadrature on (0, inf). Throws AccuracyError when quadrature does not
/// converge to 1e-9 relative.
MellinResidual mellin_identity_check(std::uint64_t d, double s);

}  // namespace quadl
