#include "quadl/selberg.hpp"

#include <algorithm>
#include <cmath>

#include "quadl/arith.hpp"
#include "quadl/characters.hpp"
#include "quadl/error.hpp"
#include "quadl/zeros.hpp"

namespace quadl {

double weight(double y, double n) {
    if (n <= y) return 1;
    const double ly = std::log(y), ln = std::log(n);
    if (ln >= 3 * ly) return 0;
    const double a = 3 * ly - ln;
    if (ln <= 2 * ly) {
        const double b = 2 * ly - ln;
        return (a * a - 2 * b * b) / (2 * ly * ly);
    }
    return a * a / (2 * ly * ly);
}

double lambda_y_d(std::uint64_t d, double y, std::uint64_t n) {
    double lam = von_mangoldt(n);
    if (lam == 0) return 0;
    int c = kronecker(static_cast<std::int64_t>(d), n);
    if (c == 0) return 0;
    return c * lam * weight(y, static_cast<double>(n));
}

SelbergSieve::SelbergSieve(double y, double budget) : y_(y) {
    if (!(y >= 1)) throw DomainError("SelbergSieve: y must be at least 1");
    const double cube = y * y * y;
    if (cube > budget) throw ResourceError("y^3 exceeds the summation budget", static_cast<std::uint64_t>(cube));
    const auto limit = static_cast<std::uint64_t>(std::floor(cube));
    primes_ = primes_up_to(limit);
    for (std::uint32_t i = 0; i < primes_.size(); ++i) {
        const std::uint64_t p = primes_[i];
        const double lp = std::log(static_cast<double>(p));
        std::uint64_t q = p;
        for (int k = 1;; ++k) {
            n_.push_back(q);
            pidx_.push_back(i);
            k_.push_back(k);
            lw_.push_back(lp * weight(y, static_cast<double>(q)));
            log_n_.push_back(k * lp);
            if (q > limit / p) break;
            q *= p;
        }
    }
}

std::vector<double> SelbergSieve::coefficients(std::uint64_t d) const {
    std::vector<int> chi_p(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) chi_p[i] = kronecker(static_cast<std::int64_t>(d), primes_[i]);
    std::vector<double> c(n_.size());
    for (std::size_t j = 0; j < n_.size(); ++j) {
        int x = chi_p[pidx_[j]];
        if (x == 0) continue;
        if (x < 0 && k_[j] % 2 == 0) x = 1;
        c[j] = x * lw_[j];
    }
    return c;
}

cplx SelbergSieve::evaluate(const std::vector<double>& coeffs, cplx s) const {
    double re = 0, im = 0;
    for (std::size_t j = 0; j < n_.size(); ++j) {
        if (coeffs[j] == 0) continue;
        const double m = coeffs[j] * std::exp(-s.real() * log_n_[j]);
        if (s.imag() == 0) {
            re += m;
        } else {
            const double ph = -s.imag() * log_n_[j];
            re += m * std::cos(ph);
            im += m * std::sin(ph);
        }
    }
    return {re, im};
}

cplx SelbergSieve::evaluate(std::uint64_t d, cplx s) const { return evaluate(coefficients(d), s); }

cplx dirichlet_poly_A(std::uint64_t d, double y, cplx s, double budget) {
    if (y * y * y < 2) return 0;
    return SelbergSieve(y, budget).evaluate(d, s);
}

SigmaYD sigma_y_d(const LEngine& engine, double y, double t, const SigmaOptions& opt) {
    if (!(y > 1)) throw DomainError("sigma_y_d: y must exceed 1");
    SigmaYD r;
    r.d = engine.d();
    r.y = y;
    r.t = t;
    const double ly = std::log(y);
    const double floor_sigma = 0.5 + 2 / ly;
    r.value = 0.5 + 4 / ly;
    // tallest point of the region, reached as beta -> 1
    const double full_height = std::exp(1.5 * ly) / ly;
    r.height = std::min(full_height, opt.height_cap);
    r.height_capped = full_height > opt.height_cap;
    if (floor_sigma >= opt.right_edge) return r;

    auto f = l_function(engine);
    auto cnt = rectangle_zero_count(f, floor_sigma, opt.right_edge, t - r.height, t + r.height, opt.max_step);
    r.rectangle_count = cnt.count;
    if (cnt.count == 0) return r;

    r.zeros = locate_rectangle_zeros(f, floor_sigma, opt.right_edge, t - r.height, t + r.height);
    double worst = 2 / ly;
    for (cplx z : r.zeros) {
        const double excess = z.real() - 0.5;
        if (std::abs(z.imag() - t) <= std::exp(3 * excess * ly) / ly) {
            worst = std::max(worst, excess);
            r.attained_by_default = false;
        }
    }
    r.value = 0.5 + 2 * worst;
    return r;
}

ApproxReport approx_check(const LEngine& engine, const SelbergSieve& sieve, const SigmaYD& sigma, double s) {
    if (s < sigma.value) throw DomainError("approx_check: s must be at least sigma_{y,d}");
    ApproxReport r;
    r.s = s;
    r.sigma = sigma.value;
    const auto coeffs = sieve.coefficients(engine.d());
    r.L = engine.log_deriv(s).value;
    r.A = sieve.evaluate(coeffs, s).real();
    r.A_at_sigma = std::abs(sieve.evaluate(coeffs, sigma.value).real());
    r.envelope = std::pow(sieve.y(), (0.5 - s) / 2) * (r.A_at_sigma + std::log(static_cast<double>(engine.d())));
    r.diff = std::abs(r.L - r.A);
    r.ratio = r.diff / r.envelope;
    return r;
}

}  // namespace quadl
