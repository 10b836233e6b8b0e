#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "quadl/arith.hpp"
#include "quadl/characters.hpp"
#include "quadl/error.hpp"

using namespace quadl;

namespace {

// Legendre symbol by Euler's criterion.
int euler_legendre(std::int64_t a, std::uint64_t p) {
    std::int64_t r = ((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
    if (r == 0) return 0;
    std::uint64_t e = (p - 1) / 2, base = static_cast<std::uint64_t>(r), acc = 1;
    while (e) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return acc == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("prime sieve and factorization") {
    CHECK(primes_up_to(30) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(1).empty());
    auto f = factorize(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<std::uint64_t, int>{2, 3});
    CHECK(f[1] == std::pair<std::uint64_t, int>{3, 2});
    CHECK(f[2] == std::pair<std::uint64_t, int>{5, 1});
    CHECK(von_mangoldt(27) == doctest::Approx(std::log(3.0)));
    CHECK(von_mangoldt(12) == 0);
    CHECK(von_mangoldt(1) == 0);
}

TEST_CASE("segmented squarefree sieve agrees with trial division") {
    auto mask = squarefree_mask(1000, 3000);
    for (std::uint64_t n = 1000; n <= 3000; ++n) CHECK(static_cast<bool>(mask[n - 1000]) == is_squarefree(n));
}

TEST_CASE("prime powers are sorted and complete") {
    auto pp = prime_powers_up_to(100);
    std::size_t expected = 0;
    for (std::uint64_t n = 2; n <= 100; ++n) expected += von_mangoldt(n) > 0;
    CHECK(pp.size() == expected);
    for (std::size_t i = 1; i < pp.size(); ++i) CHECK(pp[i - 1].n < pp[i].n);
}

TEST_CASE("jacobi symbol matches Euler's criterion at primes") {
    for (auto p : primes_up_to(200)) {
        if (p == 2) continue;
        for (std::int64_t a = -30; a <= 60; ++a) CHECK(jacobi(a, p) == euler_legendre(a, p));
    }
}

TEST_CASE("kronecker examples") {
    CHECK(kronecker(8, 1) == 1);
    CHECK(kronecker(8, 3) == -1);
    CHECK(kronecker(88, 11) == 0);
    CHECK(kronecker(8, 7) == 1);
    CHECK(kronecker(8, 5) == -1);
    CHECK(kronecker(8, 2) == 0);
    // chi_8(n) = 1 exactly for n = +-1 mod 8
    for (std::uint64_t n = 1; n < 200; n += 2) CHECK(kronecker(8, n) == ((n % 8 == 1 || n % 8 == 7) ? 1 : -1));
}

TEST_CASE("kronecker is an even primitive character of period d on the family") {
    for (const auto& disc : enumerate_family(60).members) {
        const auto d = static_cast<std::int64_t>(disc.d);
        int total = 0;
        for (std::uint64_t n = 1; n <= disc.d; ++n) {
            total += kronecker(d, n);
            CHECK(kronecker(d, n + disc.d) == kronecker(d, n));
            CHECK((kronecker(d, n) == 0) == (std::gcd(n, disc.d) > 1));
        }
        CHECK(total == 0);
        CHECK(kronecker(d, disc.d - 1) == 1);
        for (std::uint64_t a = 1; a < 40; ++a)
            for (std::uint64_t b = 1; b < 40; ++b) CHECK(kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b));
    }
}

TEST_CASE("kronecker symbol for d = 5") {
    const int table[5] = {0, 1, -1, -1, 1};
    for (std::uint64_t n = 1; n < 50; ++n) CHECK(kronecker(5, n) == table[n % 5]);
}

TEST_CASE("character table agrees with direct evaluation") {
    CharTable tab(5016), direct(5016, 0);
    CHECK(tab.tabulated());
    CHECK_FALSE(direct.tabulated());
    for (std::uint64_t n = 1; n < 20000; n += 7) CHECK(tab(n) == direct(n));
}

TEST_CASE("family enumeration") {
    auto f2 = enumerate_family(2);
    REQUIRE(f2.size() == 1);
    CHECK(f2.members[0].d == 8);
    auto f20 = enumerate_family(20);
    std::vector<std::uint64_t> ds;
    for (const auto& m : f20.members) ds.push_back(m.d);
    CHECK(ds == std::vector<std::uint64_t>{88, 104, 120, 136, 152});
    CHECK(f20.size() == 5);
    // closed lower end: x = 22 admits m = 11
    CHECK(enumerate_family(22).members.front().m == 11);
    CHECK(enumerate_family(21.5).members.front().m == 11);
    CHECK_THROWS_AS(enumerate_family(1.5), DomainError);

    auto f = enumerate_family(5000);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(f.members[i].d == 8 * f.members[i].m);
        CHECK(f.members[i].m % 2 == 1);
        CHECK(is_squarefree(f.members[i].m));
        if (i) CHECK(f.members[i - 1].d < f.members[i].d);
    }
}

TEST_CASE("make_discriminant validates the shape") {
    CHECK(make_discriminant(104).m == 13);
    CHECK_THROWS_AS(make_discriminant(9), DomainError);
    CHECK_THROWS_AS(make_discriminant(16), DomainError);
    CHECK_THROWS_AS(make_discriminant(8 * 9), DomainError);
}

TEST_CASE("character averages") {
    auto f = enumerate_family(1e4);
    CHECK(char_average(f, 1) == 1.0);
    CHECK(char_average(f, 9) == doctest::Approx(0.75).epsilon(0.02 / 0.75));
    CHECK(std::abs(char_average(f, 3)) <= 0.05);
    CHECK(char_average(f, 4) == 0.0);
    CHECK_THROWS_AS(char_average(f, 20000), DomainError);
    CHECK_THROWS_AS(char_average(Family{}, 1), DomainError);
}

TEST_CASE("family csv") {
    std::ostringstream os;
    write_family_csv(os, enumerate_family(20));
    CHECK(os.str() == "d,m\n88,11\n104,13\n120,15\n136,17\n152,19\n");
}
