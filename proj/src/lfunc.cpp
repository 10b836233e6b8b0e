#include "quadl/lfunc.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "quadl/error.hpp"

namespace quadl {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRoundFactor = 64 * kEps;

}  // namespace

LEngine::LEngine(Discriminant d, EngineOptions opt) : disc_(d), opt_(opt) {
    if (!(opt_.eps_target > 0 && opt_.eps_target < 1)) throw DomainError("eps_target must lie in (0, 1)");
    double dd = static_cast<double>(d.d);
    double need = std::sqrt(dd * (std::log(1 / opt_.eps_target) + 5) / std::numbers::pi);
    auto n = static_cast<std::uint64_t>(std::ceil(need));
    if (n > opt_.max_terms) throw ResourceError("AFE needs more terms than max_terms allows", n);
    n_trunc_ = n;
    log_d_over_pi_ = std::log(dd / std::numbers::pi);
    for (std::uint64_t k = 1; k <= n; ++k) {
        int c = kronecker(static_cast<std::int64_t>(d.d), k);
        if (c == 0) continue;
        x_.push_back(std::numbers::pi * static_cast<double>(k) * static_cast<double>(k) / dd);
        chi_.push_back(c);
        log_x_.push_back(std::log(x_.back()));
        exp_x_.push_back(std::exp(-x_.back()));
    }
}

void LEngine::check_domain(cplx s) const {
    constexpr double slack = 1e-12;
    if (!(s.real() >= kMinRe - slack && s.real() <= kMaxRe + slack && std::abs(s.imag()) <= kMaxIm + slack)) {
        throw DomainError("s outside the engine's working region");
    }
}

LEngine::Sum LEngine::afe_sum(cplx s) const {
    const cplx a1 = 0.5 * s;
    const cplx a2 = 0.5 * (1.0 - s);
    const ScaledUpperGamma g1(a1), g2(a2);
    cplx acc = 0;
    double mre = 0, mim = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        cplx h1 = g1(x_[i], log_x_[i], exp_x_[i]);
        cplx h2 = g2(x_[i], log_x_[i], exp_x_[i]);
        acc += chi_[i] * (h1 + h2);
        mre += std::abs(h1.real()) + std::abs(h2.real());
        mim += std::abs(h1.imag()) + std::abs(h2.imag());
    }
    double dd = static_cast<double>(disc_.d);
    double np1 = static_cast<double>(n_trunc_ + 1);
    double xt = std::numbers::pi * np1 * np1 / dd;
    double ratio_gap = std::numbers::pi * (2 * np1 + 1) / dd;
    double first = scaled_upper_gamma_bound(a1.real(), xt) + scaled_upper_gamma_bound(a2.real(), xt);
    double tail = first / -std::expm1(-ratio_gap);
    return {acc, mre, mim, tail};
}

cplx LEngine::gamma_factor(cplx s) const {
    return std::exp(0.5 * s * log_d_over_pi_) * gamma(0.5 * s);
}

LValue LEngine::evaluate(cplx s) const {
    check_domain(s);
    Sum sum = afe_sum(s);
    LValue v;
    v.s = s;
    v.lambda = sum.value;
    v.lambda_err = sum.tail + kRoundFactor * (sum.mag_re + sum.mag_im);
    if (std::abs(s) < 1e-6) {
        v.l = cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
        v.err_est = std::numeric_limits<double>::infinity();
        return v;
    }
    cplx gf = gamma_factor(s);
    v.l = v.lambda / gf;
    v.err_est = v.lambda_err / std::abs(gf) + kRoundFactor * std::abs(v.l);
    return v;
}

CEstimate LEngine::l_value(cplx s) const {
    if (std::abs(s) < 1e-6) throw ConditioningError("L(s) requested at the gamma-factor pole s = 0");
    LValue v = evaluate(s);
    return {v.l, v.err_est};
}

Estimate LEngine::lambda_prime(double sigma) const {
    check_domain(sigma);
    const double h = kComplexStep;
    Sum sum = afe_sum(cplx(sigma, h));
    double err = sum.tail + kRoundFactor * sum.mag_im / h;
    return {sum.value.imag() / h, err};
}

Estimate LEngine::l_prime(double sigma) const {
    check_domain(sigma);
    if (std::abs(sigma) < 1e-6) throw ConditioningError("L'(s) requested at the gamma-factor pole s = 0");
    const double h = kComplexStep;
    const cplx s(sigma, h);
    Sum sum = afe_sum(s);
    cplx gf = gamma_factor(s);
    cplx l = sum.value / gf;
    double lp = l.imag() / h;
    double g = std::abs(gf);
    double lambda_err = sum.tail + kRoundFactor * (sum.mag_re + sum.mag_im / h);
    double dlog_gamma = 0.5 * log_d_over_pi_ + 0.5 * std::abs(digamma(0.5 * sigma));
    double err = lambda_err / g * (1 + dlog_gamma) + kRoundFactor * (std::abs(lp) + std::abs(l.real()) * dlog_gamma);
    return {lp, err};
}

CEstimate LEngine::l_prime(cplx s) const {
    if (s.imag() == 0) {
        Estimate e = l_prime(s.real());
        return {e.value, e.err};
    }
    check_domain(s);
    constexpr int M = 16;
    constexpr double rho = 0.05;
    if (std::abs(s) < 2 * rho) throw ConditioningError("L'(s) requested too close to s = 0");
    cplx acc = 0;
    double err = 0;
    for (int k = 0; k < M; ++k) {
        cplx w = std::polar(1.0, 2 * std::numbers::pi * k / M);
        cplx z = s + rho * w;
        Sum sum = afe_sum(z);
        cplx gf = gamma_factor(z);
        cplx l = sum.value / gf;
        acc += l / w;
        err += (sum.tail + kRoundFactor * (sum.mag_re + sum.mag_im)) / std::abs(gf) + kRoundFactor * std::abs(l);
    }
    return {acc / (M * rho), err / (M * rho)};
}

CEstimate LEngine::log_deriv(cplx s) const {
    if (s.imag() == 0) {
        Estimate e = log_deriv(s.real());
        return {e.value, e.err};
    }
    CEstimate l = l_value(s);
    double mag = std::abs(l.value);
    if (mag < opt_.near_zero_floor) throw NearZeroError("|L(s)| below conditioning floor", mag);
    CEstimate lp = l_prime(s);
    cplx v = -lp.value / l.value;
    return {v, (lp.err + std::abs(v) * l.err) / mag};
}

Estimate LEngine::log_deriv(double sigma) const {
    check_domain(sigma);
    if (std::abs(sigma) < 1e-6) throw ConditioningError("log derivative requested at s = 0");
    const double h = kComplexStep;
    const cplx s(sigma, h);
    Sum sum = afe_sum(s);
    cplx gf = gamma_factor(s);
    cplx l = sum.value / gf;
    double mag = std::abs(l.real());
    if (mag < opt_.near_zero_floor) throw NearZeroError("|L(s)| below conditioning floor", mag);
    double lp = l.imag() / h;
    double g = std::abs(gf);
    double dlog_gamma = 0.5 * log_d_over_pi_ + 0.5 * std::abs(digamma(0.5 * sigma));
    double l_err = (sum.tail + kRoundFactor * (sum.mag_re + sum.mag_im)) / g + kRoundFactor * mag;
    double lp_err = (sum.tail + kRoundFactor * (sum.mag_re + sum.mag_im / h)) / g * (1 + dlog_gamma) +
                    kRoundFactor * std::abs(lp);
    double v = -lp / l.real();
    return {v, (lp_err + std::abs(v) * l_err) / mag};
}

cplx euler_maclaurin_oracle(std::uint64_t d, cplx s, std::uint64_t cap) {
    if (d > cap) throw ResourceError("euler_maclaurin_oracle: modulus above cap", d);
    CharTable chi(static_cast<std::int64_t>(d), cap);
    double dd = static_cast<double>(d);
    cplx acc = 0;
    for (std::uint64_t a = 1; a < d; ++a) {
        int c = chi(a);
        if (c == 0) continue;
        acc += static_cast<double>(c) * hurwitz_zeta_regular(s, static_cast<double>(a) / dd);
    }
    return std::exp(-s * std::log(dd)) * acc;
}

}  // namespace quadl
