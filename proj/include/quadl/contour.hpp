#pragma once

#include <functional>
#include <vector>

#include "quadl/lfunc.hpp"

namespace quadl {

/// A function of a complex variable returning a value with an absolute error estimate.
using ComplexFn = std::function<CEstimate(cplx)>;

/// Samples of an analytic function on a circle together with spectrally differentiated
/// first and second derivatives at the same nodes.
struct SpectralCircle {
    cplx center;
    double radius = 0;
    int nodes = 0;
    std::vector<cplx> z;
    std::vector<cplx> f;
    std::vector<cplx> df;
    std::vector<cplx> d2f;
    double noise = 0;     // absolute noise level of the samples
    int k_cut = 0;        // highest Fourier mode kept
    bool resolved = false; // true when the kept modes stay well below the Nyquist index
};

/// Samples f at `nodes` equispaced points (reusing a coarser sampling of the same circle if given).
SpectralCircle spectral_circle(const ComplexFn& f, cplx center, double radius, int nodes,
                               const SpectralCircle* coarse = nullptr);

struct ContourCount {
    int count = 0;
    double integral = 0;     // real part of the raw trapezoid value
    double integral_im = 0;  // imaginary part, should be ~0
    double winding = 0;      // independent count from accumulated argument increments
    int nodes = 0;
    double min_modulus = 0;  // min |g| over the nodes, g = f or f'
};

/// Argument-principle count of zeros of f (order 0) or f' (order 1) inside the circle.
/// Trapezoid rule starting at `start_nodes`, doubled until two successive counts agree and
/// land within 0.1 of an integer.
ContourCount circle_zero_count(const ComplexFn& f, cplx center, double radius, int order,
                               int start_nodes = 256, int max_nodes = 8192);

/// Same count from an existing sampling (no doubling).
ContourCount circle_zero_count(const SpectralCircle& sc, int order);

/// Zeros of f (order 0) or f' (order 1) inside the circle via contour power sums and
/// polynomial root finding. `count` must be the known number of zeros.
std::vector<cplx> locate_circle_zeros(const SpectralCircle& sc, int order, int count);

struct RectangleCount {
    int count = 0;
    double winding = 0;
    int evaluations = 0;
    double min_modulus = 0;
};

/// Zeros of f inside [re_lo, re_hi] x [im_lo, im_hi] by an adaptive argument walk along the
/// boundary (counterclockwise). Throws ContourProximityError when the boundary runs into a
/// zero of f (|f| below 10 err or step below min_step).
RectangleCount rectangle_zero_count(const ComplexFn& f, double re_lo, double re_hi, double im_lo,
                                    double im_hi, double max_step = 0.1, double min_step = 1e-7);

/// Zeros of f inside a rectangle, located by recursive subdivision down to `tol` in width;
/// returns midpoints of the final boxes (one per zero, repeated by multiplicity).
std::vector<cplx> locate_rectangle_zeros(const ComplexFn& f, double re_lo, double re_hi, double im_lo,
                                         double im_hi, double tol = 1e-4);

}  // namespace quadl
