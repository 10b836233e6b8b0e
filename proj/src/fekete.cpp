#include "quadl/fekete.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>

#include "quadl/error.hpp"
#include "quadl/lfunc.hpp"
#include "quadl/special.hpp"

namespace quadl {
namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

double gamma_k(double k) { return k * kUnit / (1 - k * kUnit); }

std::uint64_t period(const CharTable& chi) {
    auto m = chi.modulus();
    return static_cast<std::uint64_t>(m < 0 ? -m : m);
}

void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double z = s - a;
    e = (a - (s - z)) + (b - z);
}

}  // namespace

FeketeValue fekete_eval(const CharTable& chi, double t) {
    const std::uint64_t n = period(chi) - 1;
    double s = chi(n), c = 0, abs_sum = std::abs(s);
    for (std::uint64_t i = n; i-- > 0;) {
        const double a = i == 0 ? 0 : chi(i);
        const double p = s * t;
        const double pi = std::fma(s, t, -p);
        double sig;
        two_sum(p, a, s, sig);
        c = c * t + (pi + sig);
        abs_sum = abs_sum * t + std::abs(a);
    }
    const double g = gamma_k(2.0 * static_cast<double>(n));
    const double v = s + c;
    return {v, 2 * kUnit * std::abs(v) + g * g * abs_sum + std::numeric_limits<double>::denorm_min()};
}

FeketeValue fekete_eval(std::uint64_t d, double t) { return fekete_eval(CharTable(static_cast<std::int64_t>(d)), t); }

FeketeValue fekete_eval_ascending(const CharTable& chi, double t) {
    const std::uint64_t n = period(chi) - 1;
    double sum = 0, comp = 0, pw = 1, abs_sum = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
        pw *= t;
        const int a = chi(i);
        if (a == 0) continue;
        const double term = a * pw;
        const double u = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - u) + term : (term - u) + sum;
        sum = u;
        abs_sum += pw;
    }
    return {sum + comp, gamma_k(static_cast<double>(n) + 2) * abs_sum + std::numeric_limits<double>::denorm_min()};
}

std::vector<double> fekete_grid(std::uint64_t d, std::size_t points) {
    points += points % 2;
    const std::size_t half = points / 2;
    const double depth = std::log2(static_cast<double>(d)) + 4;
    std::vector<double> g;
    g.reserve(points);
    for (std::size_t k = 1; k <= half; ++k) g.push_back(static_cast<double>(k) / static_cast<double>(points));
    for (std::size_t j = 1; j <= half; ++j)
        g.push_back(1 - std::exp2(-1 - depth * static_cast<double>(j) / static_cast<double>(half)));
    return g;
}

FeketeZeroReport fekete_real_zeros(std::uint64_t d, std::size_t points, double refine_tol) {
    if (d < 3) throw DomainError("fekete_real_zeros: d must be at least 3");
    CharTable chi(static_cast<std::int64_t>(d));
    FeketeZeroReport r;
    r.d = d;
    if (points == 0) points = 16 * d;
    const auto grid = fekete_grid(d, points);
    r.grid_points = grid.size();

    auto sign_of = [&](double t) {
        auto v = fekete_eval(chi, t);
        if (std::abs(v.value) <= v.err) return 0;
        return v.value > 0 ? 1 : -1;
    };

    double last_t = 0;
    int last_sign = 0;
    for (double t : grid) {
        int sg = sign_of(t);
        if (sg == 0) {
            r.suspects.push_back(t);
            continue;
        }
        if (last_sign != 0 && sg != last_sign) {
            double lo = last_t, hi = t;
            int slo = last_sign;
            while (hi - lo > refine_tol) {
                double mid = 0.5 * (lo + hi);
                int sm = sign_of(mid);
                if (sm == 0) break;
                if (sm == slo) lo = mid;
                else hi = mid;
            }
            r.zeros.push_back({lo, hi});
        }
        last_t = t;
        last_sign = sg;
    }
    r.count = static_cast<int>(r.zeros.size());
    return r;
}

MellinResidual mellin_identity_check(std::uint64_t d, double s) {
    if (!(s > 0 && s <= 1)) throw DomainError("mellin_identity_check: s must lie in (0, 1]");
    CharTable chi(static_cast<std::int64_t>(d));
    LEngine engine(make_discriminant(d));
    const double dd = static_cast<double>(d);

    auto kernel = [&](double v) {
        if (v <= 0) return 0.0;
        return fekete_eval(chi, std::exp(-v)).value / -std::expm1(-dd * v);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    constexpr double tol = 1e-12;
    MellinResidual r;
    r.s = s;
    double l1 = 0, l2 = 0;
    r.rhs1 = integrator.integrate([&](double v) { return std::pow(v, s - 1) * kernel(v); }, tol, &r.quad_err1, &l1);
    r.rhs2 = integrator.integrate([&](double v) { return std::pow(v, s - 1) * std::log(v) * kernel(v); }, tol,
                                  &r.quad_err2, &l2);

    const double L = engine.l_value(cplx(s, 0)).value.real();
    const double Lp = engine.l_prime(s).value;
    const double G = gamma(cplx(s, 0)).real();
    r.lhs1 = L * G;
    r.lhs2 = G * (Lp + L * digamma(s));
    r.residual1 = std::abs(r.lhs1 - r.rhs1) / std::abs(r.lhs1);
    r.residual2 = std::abs(r.lhs2 - r.rhs2) / std::abs(r.lhs2);
    const double achieved = std::max(r.quad_err1 / std::abs(r.rhs1), r.quad_err2 / std::abs(r.rhs2));
    if (!(achieved <= 1e-9)) throw AccuracyError("Mellin quadrature did not converge", achieved);
    return r;
}

}  // namespace quadl
