#include <cmath>

#include "doctest.h"
#include "quadl/error.hpp"
#include "quadl/fekete.hpp"
#include "quadl/special.hpp"

using namespace quadl;

TEST_CASE("Fekete polynomial values") {
    CHECK(fekete_eval(8, 0).value == 0);
    CHECK(fekete_eval(8, 0.5).value == 45.0 / 128);
    for (double t : {0.1, 0.37, 0.8}) {
        double f = t * (1 - t * t) * (1 - t * t * t * t);
        CHECK(fekete_eval(8, t).value == doctest::Approx(f).epsilon(1e-15));
    }
    CHECK(std::abs(fekete_eval(8, 1 - 1e-6).value) < 1e-10);
    CHECK(fekete_eval(5, 0.5).value == doctest::Approx(0.5 * 0.25 * 1.5));
}

TEST_CASE("summation order") {
    for (std::uint64_t d : {104ull, 4008ull, 40008ull}) {
        CharTable chi(d);
        for (double t : {0.3, 0.9, 0.999, 0.99999}) {
            auto h = fekete_eval(chi, t), a = fekete_eval_ascending(chi, t);
            CHECK(std::abs(h.value - a.value) <= h.err + a.err);
        }
    }
}

TEST_CASE("grid") {
    auto g = fekete_grid(104, 64), g2 = fekete_grid(104, 128);
    CHECK(g.size() == 64);
    for (double t : g) {
        CHECK(t > 0);
        CHECK(t < 1);
        CHECK(std::binary_search(g2.begin(), g2.end(), t));
    }
    CHECK(std::is_sorted(g2.begin(), g2.end()));
}

TEST_CASE("real zeros") {
    CHECK(fekete_real_zeros(8).count == 0);
    CHECK(fekete_real_zeros(5).count == 0);
    CHECK_THROWS_AS(fekete_real_zeros(2), DomainError);

    auto r = fekete_real_zeros(40008, 2048);
    CHECK(r.count >= 1);
    CHECK(r.lower_bound_only);
    CharTable chi(40008);
    for (const auto& z : r.zeros) {
        CHECK(z.hi - z.lo <= 1e-11);
        CHECK((fekete_eval(chi, z.lo).value > 0) != (fekete_eval(chi, z.hi).value > 0));
    }
    int prev = 0;
    for (std::size_t pts : {256u, 512u, 1024u, 2048u}) {
        int c = fekete_real_zeros(40008, pts).count;
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("Mellin identities") {
    auto a = mellin_identity_check(8, 0.75);
    CHECK(a.residual1 <= 1e-6);
    CHECK(a.residual2 <= 1e-5);
    auto b = mellin_identity_check(8, 1.0);
    CHECK(b.residual1 <= 1e-6);
    CHECK(b.lhs1 == doctest::Approx(0.62322524014023051339).epsilon(1e-12));
    auto c = mellin_identity_check(104, 0.6);
    CHECK(c.residual1 <= 1e-6);
    CHECK((c.lhs1 > 0) == (c.rhs1 > 0));
    CHECK_THROWS_AS(mellin_identity_check(8, 1.5), DomainError);
}
