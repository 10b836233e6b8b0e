#pragma once

#include <string>
#include <vector>

#include "quadl/contour.hpp"
#include "quadl/lfunc.hpp"

namespace quadl {

/// 1/(Re z - 1/2).
double v_norm(cplx z);

/// An interval [lo, hi] across which L' changes sign, with |L'| > 3 err at both ends.
struct ZeroCertificate {
    double lo = 0, hi = 0;
    double f_lo = 0, f_hi = 0;
    double err_lo = 0, err_hi = 0;
    bool l_also_small = false;  // |L| below the conditioning floor at the midpoint

    double loc() const { return 0.5 * (lo + hi); }
    double halfwidth() const { return 0.5 * (hi - lo); }
};

/// A stretch where L' came within its error of zero without a certified sign change.
struct SuspectCell {
    double lo = 0, hi = 0;
    double min_abs = 0;
    int contour_count = -1;  // zeros of L' in the escalation disc, -1 if the contour failed
};

struct ZeroRecord {
    std::uint64_t d = 0;
    double sigma1 = 0, sigma2 = 0;
    int count = 0;
    std::vector<ZeroCertificate> zeros;
    std::vector<SuspectCell> suspects;
    int resolved_by_contour = 0;  // near-misses proved zero-free by a small-disc contour
    std::string method = "grid-bisection";
    bool lower_bound_only = false;
    int evaluations = 0;
};

struct RealZeroOptions {
    double grid_step = 0.01;
    double refine_tol = 1e-10;
    double suspect_width = 1e-4;  // subdivision stops here and the cell is escalated
};

/// Real zeros of L'(s, chi_d) on [sigma1, sigma2].
ZeroRecord count_real_zeros(const LEngine& engine, double sigma1, double sigma2, const RealZeroOptions& opt = {});

/// Re-evaluates a certificate: opposite signs at the ends with |L'| > 3 err.
bool verify_certificate(const LEngine& engine, const ZeroCertificate& c);

struct CoverDisc {
    int j = 0;
    double center = 0;  // 1/2 + 3^{-j}
    double r = 0;       // 1/(2 3^j)
    double R = 0;       // (5/4) r
};

struct CircleCover {
    double x = 0;
    double nu = 0;
    bool nu_clamped = false;
    int J = 0;
    bool J_extended = false;  // the floor formula left a gap and J was raised
    double left_end = 0;      // 1/2 + nu/log x
    std::vector<CoverDisc> discs;
};

/// Discs z_j = 1/2 + 3^{-j}, r_j = 1/(2 3^j), R_j = 5 r_j/4 for j = 1..J with
/// J = floor((log log x - log nu)/log 3). Coverage of [1/2 + nu/log x, 1] is checked in exact
/// rational arithmetic.
CircleCover build_cover(double x, double nu);

/// True iff t lies in some closed disc of the cover (exact rational comparison).
bool cover_contains(const CircleCover& cover, double t);

enum class Target { L, LPrime };

/// Argument-principle count of zeros of L or L' inside the circle.
ContourCount contour_zero_count(const LEngine& engine, cplx center, double radius, Target target);

/// L(s, chi_d) as a ComplexFn for the contour routines.
ComplexFn l_function(const LEngine& engine);

/// Lambda(s, chi_d) as a ComplexFn (no gamma-factor pole, usable near Re s = 0).
ComplexFn completed_function(const LEngine& engine);

struct JensenReport {
    int j = 0;
    double bound = 0;          // log(M/|L(z_j)|)/log(R/r) for L = -L'/L
    double M = 0;              // max |-L'/L| on the outer circle
    double center_value = 0;   // |-L'/L(z_j)|
    double V = 0;              // 3^j
    double M_over_V = 0;
    double center_over_V = 0;
    int nodes = 0;
};

/// Requires L zero-free on the disc of radius (7/4) r_j (checked by contour; throws
/// IndeterminateError otherwise) and -L'/L(z_j) above the conditioning floor.
JensenReport jensen_upper_bound(const LEngine& engine, const CircleCover& cover, int j, int nodes = 512);

struct GammaMinResult {
    bool found = false;
    double gamma = 0;
    double lambda_at_gamma = 0;
    double t_below = 0, t_above = 0;  // grid points bracketing the first sign change
    int rectangle_count = 0;          // zeros of Lambda in [0,1] x [0, t_above]
    bool off_line = false;
    cplx zero;                        // the lowest zero found
};

/// Lowest zero height: first sign change of Lambda(1/2 + it) on (0, t_max], refined to 1e-8,
/// cross-checked by a rectangle count on [0, 1] x [0, t_above]. step <= 0 selects pi/(4 log d).
GammaMinResult gamma_min(const LEngine& engine, double t_max, double step = 0);

struct HypothesisRadii {
    double s0 = 0;        // 1/2 + nu/log x
    double r0 = 0;        // s0 - 1/2
    double r1 = 0, r2 = 0, r3 = 0;
    double disc_radius = 0;  // nu/log x + 1/(nu^3 log x)
};

HypothesisRadii hypothesis_radii(double x, double nu);

struct HypothesisResult {
    bool holds = false;
    double witness = 0;  // contour integral value
    int count = 0;
    std::vector<cplx> witness_zeros;
    HypothesisRadii radii;
};

/// Zero-freeness of L in the disc |s - s0| <= nu/log x + 1/(nu^3 log x). Requires
/// nu <= (log log x)^{1/5}. Contour proximity propagates as IndeterminateError.
HypothesisResult hypothesis_Ld_check(const LEngine& engine, double x, double nu);

}  // namespace quadl
