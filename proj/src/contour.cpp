#include "quadl/contour.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "quadl/error.hpp"

namespace quadl {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct PlanPair {
    fftw_plan forward;
    fftw_plan backward;
};

// FFTW planning is not thread-safe; execution of an existing plan on fresh arrays is.
const PlanPair& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<fftw_complex> in(n), out(n);
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_1d(n, in.data(), out.data(), FFTW_FORWARD, flags),
               fftw_plan_dft_1d(n, in.data(), out.data(), FFTW_BACKWARD, flags)};
    return cache.emplace(n, p).first->second;
}

void run(fftw_plan plan, std::vector<cplx>& in, std::vector<cplx>& out) {
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<cplx> polynomial_roots(std::vector<cplx> monic) {
    // monic[k] is the coefficient of x^{n-k}, monic[0] = 1.
    const int n = static_cast<int>(monic.size()) - 1;
    std::vector<cplx> roots(n);
    cplx seed(0.4, 0.9);
    for (int k = 0; k < n; ++k) roots[k] = std::pow(seed, k);
    auto eval = [&](cplx x) {
        cplx v = 0;
        for (const auto& c : monic) v = v * x + c;
        return v;
    };
    for (int it = 0; it < 1000; ++it) {
        double change = 0;
        for (int i = 0; i < n; ++i) {
            cplx denom = 1;
            for (int j = 0; j < n; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            cplx delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            change = std::max(change, std::abs(delta));
        }
        if (change < 1e-15) break;
    }
    return roots;
}

}  // namespace

SpectralCircle spectral_circle(const ComplexFn& f, cplx center, double radius, int nodes, const SpectralCircle* coarse) {
    if (nodes < 8 || (nodes & (nodes - 1)) != 0) throw DomainError("spectral_circle: nodes must be a power of two >= 8");
    SpectralCircle sc;
    sc.center = center;
    sc.radius = radius;
    sc.nodes = nodes;
    sc.z.resize(nodes);
    sc.f.resize(nodes);
    std::vector<double> err(nodes, 0.0);
    bool reuse = coarse && coarse->nodes * 2 == nodes && coarse->center == center && coarse->radius == radius;
    double max_f = 0, max_err = 0;
    for (int j = 0; j < nodes; ++j) {
        sc.z[j] = center + std::polar(radius, kTwoPi * j / nodes);
        if (reuse && j % 2 == 0) {
            sc.f[j] = coarse->f[j / 2];
            continue;
        }
        CEstimate v = f(sc.z[j]);
        sc.f[j] = v.value;
        max_err = std::max(max_err, v.err);
    }
    for (const auto& v : sc.f) max_f = std::max(max_f, std::abs(v));
    if (reuse) max_err = std::max(max_err, coarse->noise);
    sc.noise = max_err + 4 * std::numeric_limits<double>::epsilon() * max_f;

    const PlanPair& plan = plans_for(nodes);
    std::vector<cplx> coef(nodes), work(sc.f);
    run(plan.forward, work, coef);
    for (auto& c : coef) c /= static_cast<double>(nodes);

    // Modes indistinguishable from sample noise are dropped before differentiating.
    int k_cut = 0;
    for (int k = 0; k < nodes; ++k) {
        if (std::abs(coef[k]) > 4 * sc.noise) k_cut = k;
    }
    sc.k_cut = k_cut;
    sc.resolved = k_cut < nodes / 2;

    std::vector<cplx> b1(nodes, 0.0), b2(nodes, 0.0), g1(nodes), g2(nodes);
    for (int k = 1; k <= k_cut; ++k) {
        b1[k] = static_cast<double>(k) * coef[k];
        b2[k] = static_cast<double>(k) * (k - 1) * coef[k];
    }
    run(plan.backward, b1, g1);
    run(plan.backward, b2, g2);
    sc.df.resize(nodes);
    sc.d2f.resize(nodes);
    for (int j = 0; j < nodes; ++j) {
        cplx rw = sc.z[j] - center;
        sc.df[j] = g1[j] / rw;
        sc.d2f[j] = g2[j] / (rw * rw);
    }
    return sc;
}

ContourCount circle_zero_count(const SpectralCircle& sc, int order) {
    if (order != 0 && order != 1) throw DomainError("circle_zero_count: order must be 0 or 1");
    const auto& F = order == 0 ? sc.f : sc.df;
    const auto& G = order == 0 ? sc.df : sc.d2f;
    const double kc = sc.k_cut + 1.0;
    double noise = order == 0 ? sc.noise : sc.noise * std::pow(kc, 1.5) / sc.radius;
    ContourCount out;
    out.nodes = sc.nodes;
    out.min_modulus = std::numeric_limits<double>::infinity();
    cplx acc = 0;
    double wind = 0, max_step = 0;
    const int n = sc.nodes;
    for (int j = 0; j < n; ++j) {
        out.min_modulus = std::min(out.min_modulus, std::abs(F[j]));
        acc += (sc.z[j] - sc.center) * G[j] / F[j];
        double step = std::arg(F[(j + 1) % n] / F[j]);
        wind += step;
        max_step = std::max(max_step, std::abs(step));
    }
    if (out.min_modulus < 10 * noise) {
        throw ContourProximityError("contour passes too close to a zero", out.min_modulus);
    }
    acc /= static_cast<double>(n);
    out.integral = acc.real();
    out.integral_im = acc.imag();
    out.winding = wind / kTwoPi;
    out.count = static_cast<int>(std::lround(out.integral));
    if (max_step > std::numbers::pi / 2) {
        throw AccuracyError("contour sampling too coarse for the argument increments", max_step);
    }
    return out;
}

ContourCount circle_zero_count(const ComplexFn& f, cplx center, double radius, int order, int start_nodes,
                               int max_nodes) {
    SpectralCircle prev = spectral_circle(f, center, radius, start_nodes);
    for (int n = 2 * start_nodes; n <= max_nodes; n *= 2) {
        SpectralCircle cur = spectral_circle(f, center, radius, n, &prev);
        if (prev.resolved && cur.resolved) {
            try {
                ContourCount a = circle_zero_count(prev, order);
                ContourCount b = circle_zero_count(cur, order);
                bool near_int = std::abs(a.integral - a.count) < 0.1 && std::abs(b.integral - b.count) < 0.1;
                bool agree = a.count == b.count && std::lround(b.winding) == b.count;
                if (near_int && agree && std::abs(b.integral_im) < 0.1) return b;
            } catch (const AccuracyError&) {
            }
        }
        prev = std::move(cur);
    }
    ContourCount last = circle_zero_count(prev, order);
    throw AccuracyError("contour integral did not stabilize at an integer", std::abs(last.integral - last.count));
}

std::vector<cplx> locate_circle_zeros(const SpectralCircle& sc, int order, int count) {
    if (count <= 0) return {};
    const auto& F = order == 0 ? sc.f : sc.df;
    const auto& G = order == 0 ? sc.df : sc.d2f;
    const int n = sc.nodes;
    // power sums of (zero - center)/radius
    std::vector<cplx> p(count + 1, 0.0);
    for (int j = 0; j < n; ++j) {
        cplx u = (sc.z[j] - sc.center) / sc.radius;
        cplx w = (sc.z[j] - sc.center) * G[j] / F[j];
        cplx um = 1;
        for (int m = 0; m <= count; ++m) {
            p[m] += um * w;
            um *= u;
        }
    }
    for (auto& v : p) v /= static_cast<double>(n);
    // Newton identities: elementary symmetric polynomials e_k.
    std::vector<cplx> e(count + 1, 0.0);
    e[0] = 1;
    for (int k = 1; k <= count; ++k) {
        cplx s = 0;
        for (int i = 1; i <= k; ++i) s += (i % 2 == 1 ? 1.0 : -1.0) * e[k - i] * p[i];
        e[k] = s / static_cast<double>(k);
    }
    std::vector<cplx> monic(count + 1);
    for (int k = 0; k <= count; ++k) monic[k] = (k % 2 == 0 ? 1.0 : -1.0) * e[k];
    std::vector<cplx> roots = count == 1 ? std::vector<cplx>{p[1]} : polynomial_roots(monic);
    for (auto& r : roots) r = sc.center + sc.radius * r;
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

RectangleCount rectangle_zero_count(const ComplexFn& f, double re_lo, double re_hi, double im_lo, double im_hi,
                                    double max_step, double min_step) {
    if (!(re_lo < re_hi && im_lo < im_hi)) throw DomainError("rectangle_zero_count: empty rectangle");
    const cplx corners[5] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi}, {re_lo, im_hi}, {re_lo, im_lo}};
    RectangleCount out;
    out.min_modulus = std::numeric_limits<double>::infinity();
    auto sample = [&](cplx z) {
        CEstimate v = f(z);
        ++out.evaluations;
        double m = std::abs(v.value);
        out.min_modulus = std::min(out.min_modulus, m);
        if (!(m > 10 * v.err)) throw ContourProximityError("rectangle edge passes too close to a zero", m);
        return v.value;
    };
    double total = 0;
    cplx cur = sample(corners[0]);
    for (int e = 0; e < 4; ++e) {
        const cplx a = corners[e], b = corners[e + 1];
        const double len = std::abs(b - a);
        double tau = 0;
        double h = std::min(max_step, len / 4);
        while (tau < 1) {
            double next = std::min(1.0, tau + h / len);
            cplx fn = sample(a + next * (b - a));
            double darg = std::arg(fn / cur);
            double dlog = std::abs(std::log(std::abs(fn) / std::abs(cur)));
            if (std::abs(darg) > std::numbers::pi / 4 || dlog > 1) {
                h *= 0.5;
                if (h < min_step) throw ContourProximityError("argument walk step underflow near a zero", out.min_modulus);
                continue;
            }
            total += darg;
            cur = fn;
            tau = next;
            h = std::min(1.5 * h, max_step);
        }
    }
    out.winding = total / kTwoPi;
    out.count = static_cast<int>(std::lround(out.winding));
    if (std::abs(out.winding - out.count) > 0.1) throw AccuracyError("rectangle winding is not an integer", out.winding);
    return out;
}

namespace {

void locate_rect(const ComplexFn& f, double x0, double x1, double y0, double y1, int count, double tol,
                 std::vector<cplx>& out, int depth) {
    if (count <= 0) return;
    if ((x1 - x0 <= tol && y1 - y0 <= tol) || depth > 60) {
        for (int i = 0; i < count; ++i) out.emplace_back(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        return;
    }
    bool split_x = (x1 - x0) >= (y1 - y0);
    // Try a few split positions in case the cut line runs through a zero.
    for (double frac : {0.5, 0.46, 0.54, 0.41, 0.59, 0.37, 0.63}) {
        double cut = split_x ? x0 + frac * (x1 - x0) : y0 + frac * (y1 - y0);
        int c1 = 0;
        try {
            c1 = split_x ? rectangle_zero_count(f, x0, cut, y0, y1, (x1 - x0) / 4).count
                         : rectangle_zero_count(f, x0, x1, y0, cut, (y1 - y0) / 4).count;
        } catch (const ContourProximityError&) {
            continue;
        }
        if (split_x) {
            locate_rect(f, x0, cut, y0, y1, c1, tol, out, depth + 1);
            locate_rect(f, cut, x1, y0, y1, count - c1, tol, out, depth + 1);
        } else {
            locate_rect(f, x0, x1, y0, cut, c1, tol, out, depth + 1);
            locate_rect(f, x0, x1, cut, y1, count - c1, tol, out, depth + 1);
        }
        return;
    }
    throw IndeterminateError("could not isolate zeros inside rectangle");
}

}  // namespace

std::vector<cplx> locate_rectangle_zeros(const ComplexFn& f, double re_lo, double re_hi, double im_lo, double im_hi,
                                         double tol) {
    int total = rectangle_zero_count(f, re_lo, re_hi, im_lo, im_hi).count;
    std::vector<cplx> out;
    locate_rect(f, re_lo, re_hi, im_lo, im_hi, total, tol, out, 0);
    return out;
}

}  // namespace quadl
