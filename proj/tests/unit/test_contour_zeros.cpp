#include <cmath>

#include "doctest.h"
#include "quadl/error.hpp"
#include "quadl/zeros.hpp"

using namespace quadl;

namespace {

ComplexFn cubic() {
    // zeros 0.2, 0.3i, -0.5; derivative zeros from 3z^2 - 2 s1 z + s2
    return [](cplx z) { return CEstimate{(z - 0.2) * (z - cplx(0, 0.3)) * (z + 0.5), 1e-16}; };
}

int fine_grid_sign_changes(const LEngine& e, double a, double b, double step) {
    int n = 0;
    double prev = e.l_prime(a).value;
    for (double s = a + step; s <= b + 1e-12; s += step) {
        double v = e.l_prime(s).value;
        if ((v > 0) != (prev > 0)) ++n;
        prev = v;
    }
    return n;
}

}  // namespace

TEST_CASE("V normalization") {
    CHECK(v_norm(cplx(1, 0)) == 2);
    CHECK(v_norm(cplx(0.75, 3)) == 4);
}

TEST_CASE("circle counts on a polynomial") {
    auto f = cubic();
    CHECK(circle_zero_count(f, 0, 1, 0).count == 3);
    CHECK(circle_zero_count(f, 0, 1, 1).count == 2);
    CHECK(circle_zero_count(f, 0.2, 0.1, 0).count == 1);
    CHECK(circle_zero_count(f, 2.0, 0.5, 0).count == 0);
    // doubling the node count keeps the integer
    CHECK(circle_zero_count(f, 0, 1, 0, 512).count == circle_zero_count(f, 0, 1, 0, 256).count);

    auto sc = spectral_circle(f, 0, 1, 256);
    auto zs = locate_circle_zeros(sc, 0, 3);
    REQUIRE(zs.size() == 3);
    for (cplx target : {cplx(0.2, 0), cplx(0, 0.3), cplx(-0.5, 0)}) {
        double best = 1;
        for (cplx z : zs) best = std::min(best, std::abs(z - target));
        CHECK(best < 1e-8);
    }
    CHECK_THROWS_AS(circle_zero_count(f, 0, 0.2, 0), ContourProximityError);
}

TEST_CASE("rectangle counts and location") {
    auto f = cubic();
    CHECK(rectangle_zero_count(f, -1, 1, -1, 1).count == 3);
    CHECK(rectangle_zero_count(f, 0.1, 1, -0.2, 0.2).count == 1);
    CHECK(rectangle_zero_count(f, 0.3, 1, -1, 1).count == 0);
    auto zs = locate_rectangle_zeros(f, -1, 1, -0.1, 0.5, 1e-6);
    CHECK(zs.size() == 3);
    CHECK_THROWS_AS(rectangle_zero_count(f, 0.2, 1, -1, 1), ContourProximityError);
}

TEST_CASE("cover geometry") {
    auto c = build_cover(1e4, std::log(std::log(1e4)));
    REQUIRE(!c.discs.empty());
    CHECK(c.discs[0].center == 5.0 / 6);
    CHECK(c.discs[0].r == 1.0 / 6);
    CHECK(c.discs[0].R == 5.0 / 24);

    const double x = std::exp(std::exp(3.0));
    auto c2 = build_cover(x, 2.0);
    CHECK(c2.J == 2);
    CHECK_FALSE(c2.nu_clamped);

    auto c3 = build_cover(1e4, 10.0);
    CHECK(c3.nu_clamped);
    CHECK(c3.nu == doctest::Approx(std::log(std::log(1e4))));

    for (double xx : {1e3, 1e4, 1e5, 1e8}) {
        auto cv = build_cover(xx, std::log(std::log(xx)));
        for (int i = 0; i <= 10000; ++i) {
            double t = cv.left_end + (1 - cv.left_end) * i / 10000.0;
            CHECK(cover_contains(cv, t));
        }
    }
}

TEST_CASE("real zeros of L' for d = 8 and d = 104") {
    LEngine e8(make_discriminant(8));
    auto r8 = count_real_zeros(e8, 0.6, 1.0);
    CHECK(r8.count == fine_grid_sign_changes(e8, 0.6, 1.0, 0.001));
    CHECK(r8.suspects.empty());

    LEngine e104(make_discriminant(104));
    auto r = count_real_zeros(e104, 0.6, 1.0);
    REQUIRE(r.count == 1);
    CHECK(r.count == fine_grid_sign_changes(e104, 0.6, 1.0, 0.001));
    CHECK(r.zeros[0].loc() == doctest::Approx(0.813517565951).epsilon(1e-9));
    CHECK(r.zeros[0].halfwidth() <= 1e-10);
    for (const auto& c : r.zeros) CHECK(verify_certificate(e104, c));

    // additivity away from certificates
    auto left = count_real_zeros(e104, 0.6, 0.7), right = count_real_zeros(e104, 0.7, 1.0);
    CHECK(left.count + right.count == r.count);
}

TEST_CASE("certified zero-free interval") {
    LEngine e(make_discriminant(8));
    // L'(sigma, chi_8) stays near 0.4-0.6 on [0.6, 1]
    auto r = count_real_zeros(e, 0.6, 1.0);
    CHECK(r.count == 0);
    CHECK_FALSE(r.lower_bound_only);
}

TEST_CASE("family sample: certificates, Jensen chain and integer contour integrals") {
    const double x = 1e4;
    auto cover = build_cover(x, std::log(std::log(x)));
    auto fam = enumerate_family(x);
    for (std::size_t i = 0; i < fam.size(); i += fam.size() / 6) {
        LEngine e(fam.members[i]);
        auto rec = count_real_zeros(e, cover.left_end, 1.0);
        for (const auto& c : rec.zeros) CHECK(verify_certificate(e, c));
        for (const auto& disc : cover.discs) {
            INFO("d=" << e.d() << " j=" << disc.j);
            CHECK(contour_zero_count(e, disc.center, 1.75 * disc.r, Target::L).count == 0);
            auto jr = jensen_upper_bound(e, cover, disc.j);
            CHECK(jr.bound * std::log(1.25) == doctest::Approx(std::log(jr.M / jr.center_value)));
            CHECK(jr.V == std::pow(3.0, disc.j));
            auto cc = contour_zero_count(e, disc.center, disc.r, Target::LPrime);
            int chord = 0;
            for (const auto& c : rec.zeros) chord += std::abs(c.loc() - disc.center) <= disc.r;
            CHECK(jr.bound >= cc.count);
            CHECK(cc.count >= chord);
            auto sc = spectral_circle(l_function(e), disc.center, disc.r, 512);
            auto raw = circle_zero_count(sc, 1);
            CHECK(std::abs(raw.integral - std::round(raw.integral)) <= 0.1);
        }
    }
}

TEST_CASE("gamma_min") {
    LEngine e8(make_discriminant(8));
    auto g = gamma_min(e8, 10);
    REQUIRE(g.found);
    CHECK(g.gamma == doctest::Approx(4.899973997007036501).epsilon(1e-8));
    CHECK(std::abs(e8.evaluate(cplx(0.5, g.gamma)).lambda) <= 1e-6);
    CHECK(g.rectangle_count == 1);
    CHECK_FALSE(g.off_line);
    // fine scan with a tenth of the default step finds no earlier sign change
    const double step = M_PI / (4 * std::log(8.0)) / 10;
    double prev = e8.evaluate(cplx(0.5, step)).lambda.real();
    double first = 0;
    for (double t = 2 * step; t < 10; t += step) {
        double v = e8.evaluate(cplx(0.5, t)).lambda.real();
        if ((v > 0) != (prev > 0)) {
            first = t;
            break;
        }
        prev = v;
    }
    CHECK(std::abs(first - g.gamma) <= step);

    LEngine e104(make_discriminant(104));
    auto g104 = gamma_min(e104, 10);
    REQUIRE(g104.found);
    CHECK(g104.gamma == doctest::Approx(1.3705839645781870031).epsilon(1e-8));

    CHECK_FALSE(gamma_min(e8, 2).found);
}

TEST_CASE("Hypothesis L_d") {
    auto h = hypothesis_radii(1e3, 1.1);
    CHECK(h.r0 < h.r1);
    CHECK(h.r1 < h.r2);
    CHECK(h.r2 < h.r3);
    CHECK(h.r3 < h.disc_radius);
    CHECK(h.r0 == doctest::Approx(1.1 / std::log(1e3)));

    const double x = 1e3, nu = std::pow(std::log(std::log(x)), 0.2);
    LEngine e8(make_discriminant(8));
    auto r = hypothesis_Ld_check(e8, x, nu);
    CHECK(r.holds);
    CHECK(r.count == 0);
    CHECK(std::abs(r.witness) < 0.1);
    CHECK_THROWS_AS(hypothesis_Ld_check(e8, x, 2.0), DomainError);
}
