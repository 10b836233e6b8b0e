#include "quadl/zeros.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quadl/error.hpp"

namespace quadl {

double v_norm(cplx z) {
    if (!(z.real() > 0.5)) throw DomainError("v_norm needs Re z > 1/2");
    return 1.0 / (z.real() - 0.5);
}

ComplexFn l_function(const LEngine& engine) {
    return [&engine](cplx s) {
        LValue v = engine.evaluate(s);
        return CEstimate{v.l, v.err_est};
    };
}

ComplexFn completed_function(const LEngine& engine) {
    return [&engine](cplx s) {
        LValue v = engine.evaluate(s);
        return CEstimate{v.lambda, v.lambda_err};
    };
}

namespace {

struct Pt {
    double s;
    double f;
    double e;
};

bool solid(const Pt& p) { return std::abs(p.f) > 3 * p.e; }

class RealScanner {
public:
    RealScanner(const LEngine& eng, const RealZeroOptions& opt, ZeroRecord& rec) : eng_(eng), opt_(opt), rec_(rec) {}

    Pt eval(double s) {
        Estimate v = eng_.l_prime(s);
        ++rec_.evaluations;
        return {s, v.value, v.err};
    }

    // Evaluates near the preferred point, moving slightly if L' is within its error of zero there.
    Pt eval_solid(double s, double lo, double hi, double spread) {
        Pt p = eval(s);
        for (double off : {0.13, -0.17, 0.29, -0.31, 0.41}) {
            if (solid(p)) break;
            double t = std::clamp(s + off * spread, lo, hi);
            p = eval(t);
        }
        return p;
    }

    void cell(const Pt& a, const Pt& b, double K) {
        const double w = b.s - a.s;
        if (solid(a) && solid(b)) {
            if ((a.f > 0) != (b.f > 0)) {
                double slope = std::abs(b.f - a.f) / w - (a.e + b.e) / w;
                if (slope > K * w || w <= opt_.suspect_width) {
                    bisect(a, b);
                    return;
                }
            } else {
                double low = std::min(std::abs(a.f), std::abs(b.f)) - 3 * std::max(a.e, b.e);
                if (low > K * w * w / 8) return;
                if (w <= opt_.suspect_width) {
                    escalations_.push_back({a.s, b.s, std::min(std::abs(a.f), std::abs(b.f)), -1});
                    return;
                }
            }
        } else if (w <= opt_.suspect_width) {
            escalations_.push_back({a.s, b.s, std::min(std::abs(a.f), std::abs(b.f)), -1});
            return;
        }
        Pt m = eval_solid(0.5 * (a.s + b.s), a.s + 0.1 * w, b.s - 0.1 * w, w);
        cell(a, m, K);
        cell(m, b, K);
    }

    void bisect(Pt a, Pt b) {
        while (b.s - a.s > 2 * opt_.refine_tol) {
            Pt m = eval(0.5 * (a.s + b.s));
            if (!solid(m)) break;
            if ((m.f > 0) == (a.f > 0)) a = m;
            else b = m;
        }
        ZeroCertificate c{a.s, b.s, a.f, b.f, a.e, b.e, false};
        try {
            c.l_also_small = std::abs(eng_.l_value(c.loc()).value) < eng_.options().near_zero_floor;
        } catch (const ConditioningError&) {
            c.l_also_small = true;
        }
        rec_.zeros.push_back(c);
    }

    std::vector<SuspectCell> escalations_;

private:
    const LEngine& eng_;
    const RealZeroOptions& opt_;
    ZeroRecord& rec_;
};

}  // namespace

ZeroRecord count_real_zeros(const LEngine& engine, double sigma1, double sigma2, const RealZeroOptions& opt) {
    if (!(sigma1 < sigma2)) throw DomainError("count_real_zeros: need sigma1 < sigma2");
    if (!(opt.grid_step > 0 && opt.refine_tol > 0)) throw DomainError("count_real_zeros: bad grid parameters");
    ZeroRecord rec;
    rec.d = engine.d();
    rec.sigma1 = sigma1;
    rec.sigma2 = sigma2;
    RealScanner scan(engine, opt, rec);

    const int n = std::max(8, static_cast<int>(std::ceil((sigma2 - sigma1) / opt.grid_step - 1e-9)));
    const double h = (sigma2 - sigma1) / n;
    std::vector<Pt> grid(n + 1);
    for (int i = 0; i <= n; ++i) {
        double s = i == n ? sigma2 : sigma1 + i * h;
        double lo = i == 0 ? sigma1 : s - 0.45 * h;
        double hi = i == n ? sigma2 : s + 0.45 * h;
        grid[i] = scan.eval_solid(s, lo, hi, h);
    }
    // Bound on |L'''| from second divided differences of L' (doubled for safety).
    double K = 1e-9;
    for (int i = 1; i < n; ++i) {
        const Pt &a = grid[i - 1], &b = grid[i], &c = grid[i + 1];
        double dd = 2 * ((c.f - b.f) / (c.s - b.s) - (b.f - a.f) / (b.s - a.s)) / (c.s - a.s);
        K = std::max(K, 2 * std::abs(dd));
    }
    for (int i = 0; i < n; ++i) scan.cell(grid[i], grid[i + 1], K);

    std::sort(rec.zeros.begin(), rec.zeros.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    // Near-misses: a small disc around the cell decides whether L' really vanishes there.
    for (auto cell : scan.escalations_) {
        double mid = 0.5 * (cell.lo + cell.hi);
        double radius = std::max(2 * (cell.hi - cell.lo), 1e-3);
        try {
            int inside = contour_zero_count(engine, mid, radius, Target::LPrime).count;
            for (const auto& z : rec.zeros) {
                if (std::abs(z.loc() - mid) < radius) --inside;
            }
            cell.contour_count = inside;
            if (inside == 0) {
                ++rec.resolved_by_contour;
                continue;
            }
        } catch (const Error&) {
            cell.contour_count = -1;
        }
        rec.suspects.push_back(cell);
    }
    rec.count = static_cast<int>(rec.zeros.size());
    rec.lower_bound_only = !rec.suspects.empty();
    return rec;
}

bool verify_certificate(const LEngine& engine, const ZeroCertificate& c) {
    if (!(c.lo < c.hi)) return false;
    Estimate a = engine.l_prime(c.lo), b = engine.l_prime(c.hi);
    return (a.value > 0) != (b.value > 0) && std::abs(a.value) > 3 * a.err && std::abs(b.value) > 3 * b.err;
}

namespace {

mpq_class exact(double v) {
    mpq_class q(v);  // exact binary value of the double
    return q;
}

CoverDisc make_disc(int j) {
    std::uint64_t p3 = 1;
    for (int i = 0; i < j; ++i) p3 *= 3;
    CoverDisc c;
    c.j = j;
    c.center = static_cast<double>(p3 + 2) / static_cast<double>(2 * p3);
    c.r = 1.0 / static_cast<double>(2 * p3);
    c.R = 5.0 / static_cast<double>(8 * p3);
    return c;
}

mpq_class pow3(int j) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(j));
    return mpq_class(p);
}

}  // namespace

CircleCover build_cover(double x, double nu) {
    if (!(x > std::exp(1.0))) throw DomainError("build_cover: need log log x > 0");
    if (!(nu > 0)) throw DomainError("build_cover: nu must be positive");
    CircleCover cov;
    cov.x = x;
    double llx = std::log(std::log(x));
    if (nu > llx) {
        nu = llx;
        cov.nu_clamped = true;
    }
    cov.nu = nu;
    cov.left_end = 0.5 + nu / std::log(x);
    if (!(cov.left_end < 1)) throw DomainError("build_cover: interval [1/2 + nu/log x, 1] is empty");
    int J = static_cast<int>(std::floor((llx - std::log(nu)) / std::log(3.0)));
    J = std::max(J, 1);
    // Union of the discs' real chords is [1/2 + 1/(2 3^J), 1].
    const mpq_class gap = exact(nu / std::log(x));
    const int J0 = J;
    while (mpq_class(1) / (2 * pow3(J)) > gap) ++J;
    cov.J = J;
    cov.J_extended = J != J0;
    for (int j = 1; j <= J; ++j) cov.discs.push_back(make_disc(j));
    return cov;
}

bool cover_contains(const CircleCover& cover, double t) {
    mpq_class q = exact(t);
    for (const auto& d : cover.discs) {
        mpq_class p3 = pow3(d.j);
        mpq_class center = mpq_class(1, 2) + 1 / p3;
        mpq_class r = 1 / (2 * p3);
        mpq_class diff = q - center;
        if (abs(diff) <= r) return true;
    }
    return false;
}

ContourCount contour_zero_count(const LEngine& engine, cplx center, double radius, Target target) {
    return circle_zero_count(l_function(engine), center, radius, target == Target::L ? 0 : 1);
}

JensenReport jensen_upper_bound(const LEngine& engine, const CircleCover& cover, int j, int nodes) {
    if (j < 1 || j > cover.J) throw DomainError("jensen_upper_bound: circle index out of range");
    const CoverDisc& disc = cover.discs[j - 1];
    ContourCount outer = contour_zero_count(engine, disc.center, 1.75 * disc.r, Target::L);
    if (outer.count != 0) throw IndeterminateError("L has zeros in the enclosing disc; -L'/L is not analytic there");
    SpectralCircle sc = spectral_circle(l_function(engine), disc.center, disc.R, nodes);
    if (!sc.resolved) throw AccuracyError("outer circle under-resolved", sc.k_cut);
    JensenReport rep;
    rep.j = j;
    rep.nodes = nodes;
    for (int i = 0; i < nodes; ++i) rep.M = std::max(rep.M, std::abs(sc.df[i] / sc.f[i]));
    Estimate c = engine.log_deriv(disc.center);
    rep.center_value = std::abs(c.value);
    if (!(rep.center_value > engine.options().near_zero_floor)) {
        throw ConditioningError("-L'/L at the circle center is below the conditioning floor");
    }
    rep.V = std::pow(3.0, j);
    rep.bound = (std::log(rep.M) - std::log(rep.center_value)) / std::log(1.25);
    rep.M_over_V = rep.M / rep.V;
    rep.center_over_V = rep.center_value / rep.V;
    return rep;
}

GammaMinResult gamma_min(const LEngine& engine, double t_max, double step) {
    if (!(t_max > 0 && t_max <= LEngine::kMaxIm)) throw DomainError("gamma_min: t_max must lie in (0, 60]");
    if (step <= 0) step = std::numbers::pi / (4 * std::log(static_cast<double>(engine.d())));
    auto Z = [&](double t) {
        LValue v = engine.evaluate(cplx(0.5, t));
        return Estimate{v.lambda.real(), v.lambda_err};
    };
    auto firm = [](const Estimate& e) { return std::abs(e.value) > 3 * e.err; };
    GammaMinResult res;
    double t_prev = 0;
    Estimate z_prev = Z(0);
    if (!firm(z_prev)) throw IndeterminateError("Lambda(1/2) is within its error of zero");
    for (int k = 1;; ++k) {
        const double base = std::min(k * step, t_max);
        double t = base;
        Estimate z = Z(t);
        for (double off : {0.21, -0.23, 0.37}) {
            if (firm(z) || base >= t_max) break;
            t = std::min(base + off * step, t_max);
            z = Z(t);
        }
        if (firm(z) && (z.value > 0) != (z_prev.value > 0)) {
            double lo = t_prev, hi = t;
            double flo = z_prev.value;
            while (hi - lo > 1e-8) {
                double mid = 0.5 * (lo + hi);
                Estimate zm = Z(mid);
                if ((zm.value > 0) == (flo > 0)) lo = mid;
                else hi = mid;
                if (!firm(zm)) break;
            }
            res.found = true;
            res.gamma = 0.5 * (lo + hi);
            res.lambda_at_gamma = Z(res.gamma).value;
            res.t_below = t_prev;
            res.t_above = t;
            res.zero = cplx(0.5, res.gamma);
            break;
        }
        if (firm(z)) {
            t_prev = t;
            z_prev = z;
        }
        if (base >= t_max) return res;
    }
    ComplexFn lam = completed_function(engine);
    RectangleCount rc = rectangle_zero_count(lam, 0.0, 1.0, 0.0, res.t_above, 0.05);
    res.rectangle_count = rc.count;
    if (rc.count == 0) throw IndeterminateError("sign change of Lambda not confirmed by the rectangle count");
    if (rc.count > 1) {
        auto zs = locate_rectangle_zeros(lam, 0.0, 1.0, 0.0, res.t_above, 1e-7);
        auto lowest = std::min_element(zs.begin(), zs.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
        if (lowest != zs.end() && lowest->imag() < res.gamma - 1e-6) {
            res.zero = *lowest;
            res.gamma = lowest->imag();
            res.off_line = std::abs(lowest->real() - 0.5) > 1e-6;
        }
    }
    return res;
}

HypothesisRadii hypothesis_radii(double x, double nu) {
    if (!(x > std::exp(1.0) && nu > 0)) throw DomainError("hypothesis_radii: bad parameters");
    double L = std::log(x);
    double c = 1.0 / (nu * nu * nu * L);
    HypothesisRadii r;
    r.s0 = 0.5 + nu / L;
    r.r0 = nu / L;
    r.r1 = r.r0 + c / 4;
    r.r2 = r.r0 + c / 2;
    r.r3 = r.r0 + 3 * c / 4;
    r.disc_radius = nu / L + c;
    return r;
}

HypothesisResult hypothesis_Ld_check(const LEngine& engine, double x, double nu) {
    double cap = std::pow(std::log(std::log(x)), 0.2);
    if (nu > cap * (1 + 1e-12)) throw DomainError("hypothesis_Ld_check: nu exceeds (log log x)^{1/5}");
    HypothesisResult res;
    res.radii = hypothesis_radii(x, nu);
    ComplexFn L = l_function(engine);
    ContourCount cc = circle_zero_count(L, res.radii.s0, res.radii.disc_radius, 0);
    res.count = cc.count;
    res.witness = cc.integral;
    res.holds = cc.count == 0;
    if (!res.holds) {
        SpectralCircle sc = spectral_circle(L, res.radii.s0, res.radii.disc_radius, cc.nodes);
        res.witness_zeros = locate_circle_zeros(sc, 0, cc.count);
    }
    return res;
}

}  // namespace quadl
