#include <cmath>

#include "doctest.h"
#include "quadl/arith.hpp"
#include "quadl/error.hpp"
#include "quadl/lfunc.hpp"
#include "quadl/rng.hpp"

using namespace quadl;

namespace {

// Reference values computed with mpmath at 30 digits (tests/oracles/reference_values.py).
struct RealRef {
    std::uint64_t d;
    double s, L, Lp;
};
const RealRef kRealRefs[] = {
    {8, 0.55, 0.40382628016460664806, 0.59023887554923241872},
    {8, 0.75, 0.51230896250732621613, 0.49627697084723447097},
    {8, 0.8, 0.53657367413503066595, 0.47442526320701963764},
    {8, 1.0, 0.62322524014023051339, 0.39395000150641812877},
    {8, 2.0, 0.87235802495485994177, 0.14151832264995644203},
    {104, 0.55, 0.8884418162968162141, 0.2209297471729723925},
    {104, 0.75, 0.9087978119670356633, 0.023105135126412786125},
    {104, 0.8, 0.90943908882022854498, 0.0038937818534290856323},
    {104, 1.0, 0.90701294047153055654, -0.01708276003124949458},
    {104, 2.0, 0.93057147619445025557, 0.047592244506548109057},
};

struct ComplexRef {
    std::uint64_t d;
    cplx s, L;
};
const ComplexRef kComplexRefs[] = {
    {8, {0.7, 3.0}, {1.6953743768343844327, -0.20135841257808869649}},
    {8, {0.5, 1.0}, {0.63881312170378774264, 0.56919024551734082613}},
    {8, {0.3, -2.0}, {1.4974025780682816955, -0.88358460817197814259}},
    {104, {0.7, 3.0}, {1.2921728537978543708, -0.66231302757718406568}},
    {104, {0.5, 1.0}, {0.6733773362177292066, -0.41716938975544242655}},
    {104, {0.3, -2.0}, {0.78537610249795743788, -2.9263960134345510538}},
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("gamma function family against mpmath") {
    CHECK(std::abs(gamma(cplx(0.75, 0)) - 1.2254167024651776451) < 1e-14);
    CHECK(rel(gamma(cplx(0.1, -0.3)), cplx(0.56864003826097452325, 2.7668025190278325253)) < 1e-13);
    CHECK(rel(log_gamma(cplx(0.25, 15)), cplx(-23.319984172604715982, 25.228748424304992812)) < 1e-13);
    CHECK(digamma(0.75) == doctest::Approx(-1.0858608797864721696).epsilon(1e-14));
    CHECK(digamma(-0.5) == doctest::Approx(0.03648997397857652056).epsilon(1e-12));
    CHECK_THROWS_AS(gamma(cplx(-2, 0)), DomainError);
}

TEST_CASE("upper incomplete gamma against mpmath") {
    CHECK(rel(upper_gamma(cplx(0.3, 2), 0.7), cplx(0.25235098491553602461, 0.099566008370855443229)) < 1e-13);
    CHECK(rel(upper_gamma(cplx(-0.2, 0.5), 1.5), cplx(0.079533824463996567954, 0.030807420648387041515)) < 1e-13);
    CHECK(std::abs(upper_gamma(cplx(0.25, 0), 5).real() - 0.0017838911662867680839) < 1e-17);
    CHECK(std::abs(upper_gamma(cplx(0, 0), 0.01).real() - 4.0379295765381138318) < 1e-13);
    CHECK(rel(upper_gamma(cplx(0.6, -10), 3), cplx(0.0093180336423880554971, 0.0024484473607829992324)) < 1e-13);
}

TEST_CASE("incomplete gamma complex-step derivative in a") {
    // d/da [x^{-a} Gamma(a, x)] from mpmath
    const double h = LEngine::kComplexStep;
    CHECK(scaled_upper_gamma(cplx(-0.5, h), 0.5).imag() / h == doctest::Approx(0.2234935077496224).epsilon(1e-12));
    CHECK(scaled_upper_gamma(cplx(1, h), 2).imag() / h == doctest::Approx(0.024450255354030560).epsilon(1e-12));
}

TEST_CASE("Hurwitz zeta against mpmath") {
    CHECK(rel(hurwitz_zeta(cplx(0.75, 2), 0.3), cplx(-1.7065622726228612981, 1.0877100407604790937)) < 1e-12);
}

TEST_CASE("engine truncation length covers the target") {
    LEngine e(make_discriminant(5016));
    const double n = static_cast<double>(e.n_trunc());
    CHECK(M_PI * n * n / 5016 >= std::log(1e15));
}

TEST_CASE("L values against mpmath") {
    for (const auto& r : kRealRefs) {
        LEngine e(make_discriminant(r.d));
        INFO("d=" << r.d << " s=" << r.s);
        auto v = e.l_value(cplx(r.s, 0));
        CHECK(std::abs(v.value.real() - r.L) < 1e-13);
        CHECK(std::abs(v.value.imag()) <= 1e-12);
        CHECK(v.err < 1e-12);
        CHECK(std::abs(e.l_prime(r.s).value - r.Lp) < 1e-12);
    }
    for (const auto& r : kComplexRefs) {
        LEngine e(make_discriminant(r.d));
        INFO("d=" << r.d << " s=" << r.s);
        CHECK(std::abs(e.l_value(r.s).value - r.L) < 1e-12);
    }
    LEngine e8(make_discriminant(8));
    CHECK(std::abs(e8.evaluate(0.7).lambda.real() - 1.7196230005037981525) < 1e-13);
    CHECK(std::abs(e8.evaluate(cplx(0.5, 1)).lambda - 1.5188929638273134959) < 1e-13);
}

TEST_CASE("class number anchor") {
    LEngine e(make_discriminant(8));
    const double ref = std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0);
    CHECK(std::abs(e.l_value(cplx(1, 0)).value.real() - ref) < 1e-10);
    CHECK(std::abs(euler_maclaurin_oracle(8, 1.0).real() - ref) < 1e-10);
}

TEST_CASE("direct Dirichlet series at s = 2") {
    LEngine e(make_discriminant(8));
    double L = 0, Lp = 0, ld = 0;
    for (std::uint64_t n = 1; n <= 1000000; ++n) {
        int c = kronecker(8, n);
        if (c == 0) continue;
        const double ln = std::log(static_cast<double>(n)), inv = 1.0 / (static_cast<double>(n) * n);
        L += c * inv;
        Lp -= c * ln * inv;
        ld += c * von_mangoldt(n) * inv;
    }
    CHECK(std::abs(e.l_value(cplx(2, 0)).value.real() - L) < 1e-8);
    CHECK(std::abs(euler_maclaurin_oracle(8, 2.0).real() - L) < 1e-10);
    CHECK(std::abs(e.l_prime(2.0).value - Lp) < 1e-8);
    CHECK(std::abs(e.log_deriv(2.0).value - ld) < 1e-6);
}

TEST_CASE("functional equation and reality") {
    for (std::uint64_t d : {8u, 104u, 408u, 40008u}) {
        LEngine e(make_discriminant(d));
        for (std::uint64_t i = 0; i < 100; ++i) {
            cplx s(0.25 + to_unit(counter_hash(d, 1, i)), -60 + 120 * to_unit(counter_hash(d, 2, i)));
            cplx a = e.evaluate(s).lambda, b = e.evaluate(1.0 - s).lambda;
            CHECK(std::abs(a - b) <= 1e-10 * (1 + std::abs(a)));
            cplx c = e.evaluate(std::conj(s)).lambda;
            CHECK(std::abs(c - std::conj(a)) <= 1e-13 * (1 + std::abs(a)));
        }
        for (double t : {0.5, 3.0, 17.0, 42.0}) {
            auto v = e.evaluate(cplx(0.5, t)).lambda;
            CHECK(std::abs(v.imag()) <= 1e-10 * (1 + std::abs(v)));
        }
        for (double sigma : {0.3, 0.6, 0.9, 1.3}) CHECK(std::abs(e.l_value(cplx(sigma, 0)).value.imag()) <= 1e-12);
    }
}

TEST_CASE("derivatives") {
    LEngine e(make_discriminant(8));
    const double h = 1e-6;
    double fd = (e.l_value(cplx(0.8 + h, 0)).value.real() - e.l_value(cplx(0.8 - h, 0)).value.real()) / (2 * h);
    CHECK(std::abs(e.l_prime(0.8).value - fd) <= 1e-6 * std::abs(fd));
    CHECK(std::abs(e.lambda_prime(0.7).value + e.lambda_prime(0.3).value) < 1e-9);
    // Cauchy-circle derivative off the axis agrees with complex-step on it
    CHECK(std::abs(e.l_prime(cplx(0.8, 0)).value - e.l_prime(0.8).value) < 1e-9);
    CHECK(std::abs(e.l_prime(cplx(0.7, 3)).value - cplx(-0.9533029616070776963, 0.1904354029825955757)) < 1e-9);
    CHECK(std::abs(e.l_prime(cplx(0.5, 1)).value - cplx(0.4567400907113591951, -0.5475239342054968225)) < 1e-9);
}

TEST_CASE("log derivative near a zero raises") {
    LEngine e(make_discriminant(8));
    // first zero on the critical line, height from mpmath
    const cplx rho(0.5, 4.899973997007036501);
    CHECK_THROWS_AS(e.log_deriv(rho), NearZeroError);
    CHECK(std::isfinite(e.log_deriv(0.75).value));
    try {
        e.log_deriv(rho);
    } catch (const NearZeroError& err) {
        CHECK(err.magnitude() < 1e-12);
    }
}

TEST_CASE("engine domain and pole handling") {
    LEngine e(make_discriminant(8));
    CHECK_THROWS_AS(e.l_value(cplx(0, 0)), ConditioningError);
    CHECK_THROWS_AS(e.evaluate(cplx(0.5, 61)), DomainError);
    CHECK_THROWS_AS(e.evaluate(cplx(3.0, 0)), DomainError);
    CHECK(std::isnan(e.evaluate(cplx(0, 0)).l.real()));
    CHECK_THROWS_AS(euler_maclaurin_oracle(40008, 0.7), ResourceError);
}

TEST_CASE("oracle agreement grid") {
    for (std::uint64_t d : {8u, 104u, 408u, 1032u, 5016u}) {
        LEngine e(make_discriminant(d));
        for (double s : {0.55, 0.7, 0.85, 1.0, 1.2}) {
            INFO("d=" << d << " s=" << s);
            CHECK(std::abs(e.l_value(cplx(s, 0)).value - euler_maclaurin_oracle(d, s)) <= 1e-8);
        }
        CHECK(std::abs(e.l_value(cplx(0.6, 5)).value - euler_maclaurin_oracle(d, cplx(0.6, 5))) <= 1e-8);
    }
}
