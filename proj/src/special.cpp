#include "quadl/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "quadl/error.hpp"

namespace quadl {
namespace {

// Taylor coefficients of 1/Gamma(1 + a) at a = 0.
constexpr std::array<double, 31> kRgamma1p = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
    -2.2987456844353702066e-19,
    1.7144063219273374334e-20,
    1.3373517304936931149e-22,
};

// B_2, B_4, ..., B_24
constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6,         -1.0 / 30,         1.0 / 42,         -1.0 / 30,
    5.0 / 66,        -691.0 / 2730,     7.0 / 6,          -3617.0 / 510,
    43867.0 / 798,   -174611.0 / 330,   854513.0 / 138,   -236364091.0 / 2730,
};

const double kHalfLog2Pi = 0.5 * std::log(2 * std::numbers::pi);

cplx stirling_log_gamma(cplx z) {
    cplx inv = 1.0 / z;
    cplx inv2 = inv * inv;
    cplx corr = 0;
    cplx p = inv;
    for (int k = 1; k <= 10; ++k) {
        corr += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1)) * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + corr;
}

}  // namespace

cplx expm1(cplx w) {
    double u = w.real(), v = w.imag();
    double s = std::sin(0.5 * v);
    return {std::expm1(u) * std::cos(v) - 2 * s * s, std::exp(u) * std::sin(v)};
}

cplx expm1_ratio(cplx w) {
    if (std::abs(w) < 1e-3) {
        return 1.0 + w * (1.0 / 2 + w * (1.0 / 6 + w * (1.0 / 24 + w * (1.0 / 120 + w / 720.0))));
    }
    return expm1(w) / w;
}

cplx log_gamma(cplx z) {
    if (z.real() <= 0 && z.imag() == 0 && z.real() == std::floor(z.real())) {
        throw DomainError("log_gamma: pole");
    }
    cplx shift = 0;
    while (z.real() < 12) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling_log_gamma(z) - shift;
}

cplx gamma(cplx z) {
    if (z.real() <= 0 && z.imag() == 0 && z.real() == std::floor(z.real())) {
        throw DomainError("gamma: pole");
    }
    cplx prod = 1;
    while (z.real() < 12) {
        prod *= z;
        z += 1.0;
    }
    return std::exp(stirling_log_gamma(z)) / prod;
}

cplx gamma1pm1_ratio(cplx a) {
    if (std::abs(a) < 0.5) {
        // r = 1/Gamma(1+a) = sum c_k a^k, and (Gamma(1+a) - 1)/a = ((1 - r)/a)/r
        cplx r = 0, q = 0;
        for (int k = static_cast<int>(kRgamma1p.size()) - 1; k >= 1; --k) {
            q = q * a + kRgamma1p[k];
        }
        r = 1.0 + a * q;
        return -q / r;
    }
    return (gamma(1.0 + a) - 1.0) / a;
}

cplx upper_gamma(cplx a, double x) {
    return std::exp(a * std::log(x)) * scaled_upper_gamma(a, x);
}

ScaledUpperGamma::ScaledUpperGamma(cplx a) : a_(a), g1_(gamma1pm1_ratio(a)) {}

cplx ScaledUpperGamma::operator()(double x) const {
    if (!(x > 0)) throw DomainError("scaled_upper_gamma: x must be positive");
    return (*this)(x, std::log(x), std::exp(-x));
}

cplx ScaledUpperGamma::operator()(double x, double log_x, double exp_minus_x) const {
    const cplx a = a_;
    if (x < 2) {
        cplx xa = std::exp(a * log_x);
        // x^a sum_{k>=1} (-x)^k / (k! (a + k))
        cplx sum = 0;
        double term = 1;
        for (int k = 1; k < 200; ++k) {
            term *= -x / k;
            sum += term / (a + static_cast<double>(k));
            if (std::abs(term) < 1e-20) break;
        }
        cplx g = g1_ - log_x * expm1_ratio(a * log_x) - xa * sum;
        return g / xa;
    }
    // Modified Lentz on the continued fraction for e^x x^{-a} Gamma(a, x).
    constexpr double eps = 1e-17;
    constexpr double tiny = 1e-150;
    cplx b = x + 1.0 - a;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    int settle = 0;
    for (int i = 1; i < 20000; ++i) {
        double fi = i;
        cplx an = fi * (a - fi);
        b += 2.0;
        d = an * d + b;
        if (std::norm(d) < tiny * tiny) d = tiny;
        c = b + an / c;
        if (std::norm(c) < tiny * tiny) c = tiny;
        d = 1.0 / d;
        cplx del = d * c;
        h *= del;
        // The imaginary test is relative to Im h so that complex-step perturbations converge
        // as well; at integer a the real recursion terminates while the perturbation does not.
        double di = del.imag();
        bool im_ok = di * di * std::norm(h) <= eps * eps * h.imag() * h.imag() || std::abs(di) < 1e-300;
        if (std::abs(del.real() - 1.0) < eps && im_ok) {
            if (++settle >= 2) return exp_minus_x * h;
        } else {
            settle = 0;
        }
    }
    throw AccuracyError("scaled_upper_gamma: continued fraction did not converge", std::abs(h));
}

cplx scaled_upper_gamma(cplx a, double x) {
    return ScaledUpperGamma(a)(x);
}

double scaled_upper_gamma_bound(double re_a, double x) {
    // t^{a-1} <= e^{(a-1)(t-1)} for t >= 1 when a >= 1, and t^{a-1} <= 1 otherwise.
    double beta = re_a > 1 ? re_a - 1 : 0.0;
    if (!(x > beta)) throw DomainError("scaled_upper_gamma_bound: x too small");
    return std::exp(-x) / (x - beta);
}

double digamma(double x) {
    if (x <= 0 && x == std::floor(x)) throw DomainError("digamma: pole");
    double acc = 0;
    if (x < 0) {
        // reflection
        return digamma(1 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    }
    while (x < 12) {
        acc -= 1 / x;
        x += 1;
    }
    double inv2 = 1 / (x * x);
    double p = inv2;
    double series = 0;
    for (int k = 1; k <= 10; ++k) {
        series += kBernoulli[k - 1] / (2.0 * k) * p;
        p *= inv2;
    }
    return acc + std::log(x) - 0.5 / x - series;
}

cplx hurwitz_zeta_regular(cplx s, double a) {
    if (!(a > 0 && a <= 1)) throw DomainError("hurwitz_zeta: need 0 < a <= 1");
    const int n = 20 + static_cast<int>(std::ceil(std::abs(s)));
    cplx sum = 0;
    for (int k = 0; k < n; ++k) sum += std::exp(-s * std::log(k + a));
    double big = n + a;
    double lb = std::log(big);
    cplx pw = std::exp(-s * lb);  // (N + a)^{-s}
    // (N+a)^{1-s}/(s-1) - 1/(s-1) = -log(N+a) * expm1((1-s) log(N+a)) / ((1-s) log(N+a))
    sum += -lb * expm1_ratio((1.0 - s) * lb);
    sum += 0.5 * pw;
    // sum_j B_2j/(2j)! (s)_{2j-1} (N+a)^{-s-2j+1}
    cplx rising = s;  // (s)_{1}
    cplx powk = pw / big;
    double fact = 2;  // (2j)!
    for (int j = 1; j <= 12; ++j) {
        sum += kBernoulli[j - 1] / fact * rising * powk;
        rising *= (s + (2.0 * j - 1)) * (s + 2.0 * j);
        powk /= big * big;
        fact *= (2.0 * j + 1) * (2.0 * j + 2);
    }
    return sum;
}

cplx hurwitz_zeta(cplx s, double a) {
    if (s == cplx(1, 0)) throw DomainError("hurwitz_zeta: pole at s = 1");
    return hurwitz_zeta_regular(s, a) + 1.0 / (s - 1.0);
}

}  // namespace quadl
