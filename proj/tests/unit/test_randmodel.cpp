#include <cmath>
#include <numeric>

#include "doctest.h"
#include "quadl/arith.hpp"
#include "quadl/error.hpp"
#include "quadl/randmodel.hpp"

using namespace quadl;

TEST_CASE("three-point law") {
    CHECK(three_point_draw(2, 0.9) == 0);
    CHECK(three_point_draw(3, 0.2) == 0);
    CHECK(three_point_draw(3, 0.3) == 1);
    CHECK(three_point_draw(3, 0.7) == -1);

    auto a = sample_assignment(7, 1000);
    CHECK(a.at(2) == 0);
    CHECK_THROWS_AS(a.at(9), DomainError);
    CHECK_THROWS_AS(a.at(1009), DomainError);

    auto b = sample_assignment(7, 1000);
    CHECK(a.values() == b.values());
    CHECK(sample_assignment(8, 1000).values() != a.values());
}

TEST_CASE("zero frequency at p = 3") {
    const int n = 1'000'000;
    int zeros = 0;
    for (int seed = 0; seed < n; ++seed) zeros += sample_assignment(seed, 3).at(3) == 0;
    const double sd = std::sqrt(0.25 * 0.75 / n);
    CHECK(std::abs(double(zeros) / n - 0.25) <= 3 * sd);
}

TEST_CASE("X extended multiplicatively") {
    auto a = sample_assignment(3, 100);
    CHECK(X_of(1, a) == 1);
    CHECK(X_of(12, a) == 0);
    auto fixed = RandomAssignment::with_values(5, {0, -1, 1});
    CHECK(X_of(9, fixed) == 1);
    CHECK(X_of(15, fixed) == -1);
    CHECK(X_of(75, fixed) == -1);
    CHECK_THROWS_AS(X_of(7, fixed), DomainError);

    const int S = 200000;
    double sum = 0;
    for (int s = 0; s < S; ++s) sum += X_of(9, sample_assignment(1000 + s, 3));
    CHECK(std::abs(sum / S - 0.75) <= 4 * std::sqrt(3.0 / 16 / S));
}

TEST_CASE("exact expectations") {
    CHECK(expect_X(1) == 1);
    CHECK(expect_X(7) == 0);
    CHECK(expect_X(9) == mpq_class(3, 4));
    CHECK(expect_X(225) == mpq_class(5, 8));
    CHECK(expect_X(4) == 0);
    CHECK(expect_X(27) == 0);
    CHECK(expect_X(81) == mpq_class(3, 4));
    for (std::uint64_t n1 : {9ull, 25ull, 49ull, 15ull, 121ull})
        for (std::uint64_t n2 : {169ull, 289ull, 11ull, 361ull})
            if (std::gcd(n1, n2) == 1) CHECK(expect_X(n1 * n2) == expect_X(n1) * expect_X(n2));
}

TEST_CASE("truncated random series") {
    auto zero = RandomAssignment::with_values(1000, std::vector<std::int8_t>(168, 0));
    CHECK(sample_L_rand(0.75, zero).value == 0);

    const std::uint64_t P = 1000;
    auto primes = primes_up_to(P);
    auto ones = RandomAssignment::with_values(P, std::vector<std::int8_t>(primes.size(), 1));
    double direct = 0;
    for (std::size_t i = primes.size(); i-- > 1;) direct += std::log(double(primes[i])) / (primes[i] - 1.0);
    CHECK(sample_L_rand(1.0, ones).value == doctest::Approx(direct).epsilon(1e-13));

    auto r = sample_L_rand(0.9, sample_assignment(1, 10000));
    CHECK(r.tail_bound > 0);
    CHECK(r.tail_bound == rand_tail_rms_bound(0.9, 10000));
    CHECK(rand_tail_rms_bound(0.9, 100000) < r.tail_bound);

    try {
        sample_L_rand(0.9, sample_assignment(1, 1000), 1e-3);
        FAIL("expected truncation error");
    } catch (const TruncationError& e) {
        CHECK(e.suggested_cutoff() > 1000);
        CHECK(rand_tail_rms_bound(0.9, e.suggested_cutoff()) <= 1e-3);
    }
    CHECK_THROWS_AS(sample_L_rand(0.5, zero), DomainError);
}

TEST_CASE("term mean at a single prime") {
    const double z = 0.8;
    const std::uint64_t p = 5;
    const double lp = std::log(5.0), pz = std::pow(5.0, z);
    const double exact = (p / (2.0 * (p + 1))) * 2 * lp / (pz * pz - 1);
    const int S = 400000;
    double sum = 0, sq = 0;
    for (int s = 0; s < S; ++s) {
        int x = sample_assignment(s, 5).at(5);
        double t = x * lp / (pz - x);
        sum += t;
        sq += t * t;
    }
    double mean = sum / S, se = std::sqrt((sq / S - mean * mean) / S);
    CHECK(std::abs(mean - exact) <= 4 * se);
}

TEST_CASE("sampler and characteristic function") {
    RandSampler rs(0.9);
    CHECK(rs.draw(5, 17) == rs.draw(5, 17));
    CHECK(rs.draw(5, 17) != rs.draw(5, 18));
    CHECK(rs.characteristic(0) == cplx(1, 0));
    CHECK(std::abs(rs.characteristic(3.0) - std::conj(rs.characteristic(-3.0))) < 1e-15);

    const int n = 20000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        double v = rs.draw(11, i);
        sum += v;
        sq += v * v;
    }
    double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - rs.mean()) <= 4 * se);

    CHECK(char_fn_rand(0.9, 0, 500, 3).value == cplx(1, 0));
    for (double u : {0.3, 1.0, 5.0}) {
        auto c = char_fn_rand(0.9, u, 2000, 3);
        CHECK(std::abs(c.value) <= 1 + c.std_error);
        auto m = char_fn_rand(0.9, -u, 2000, 3);
        CHECK(std::abs(m.value - std::conj(c.value)) < 1e-12);
    }

    double prev = 2;
    int drops = 0;
    RandSampler r75(0.75);
    for (double u : {5.0, 10.0, 20.0}) {
        double a = std::abs(r75.characteristic(u));
        drops += a < prev;
        prev = a;
    }
    CHECK(drops == 3);
}

TEST_CASE("exact moments of the random model") {
    std::map<std::uint64_t, mpq_class> none;
    CHECK(moment_rand(none, 3, 2) == 0);

    std::map<std::uint64_t, mpq_class> b{{2, 1}, {3, 1}};
    CHECK(moment_rand(b, 3, 2) == mpq_class(3, 4));
    CHECK(moment_rand({{3, 1}}, 3, 3) == 0);

    std::map<std::uint64_t, mpq_class> primes{{3, 1}, {5, 2}, {7, mpq_class(1, 3)}};
    CHECK(moment_rand(primes, 7, 1) == 0);
    CHECK(moment_rand(primes, 7, 3) == 0);
    CHECK(moment_rand(primes, 7, 4) > 0);

    // k = 2 with b = 1 on [1, 10]: E[X(m n)] summed over pairs
    std::map<std::uint64_t, mpq_class> all;
    for (std::uint64_t n = 1; n <= 10; ++n) all[n] = 1;
    mpq_class direct = 0;
    for (std::uint64_t m = 1; m <= 10; ++m)
        for (std::uint64_t n = 1; n <= 10; ++n) direct += expect_X(m * n);
    CHECK(moment_rand(all, 10, 2) == direct);

    CHECK_THROWS_AS(moment_rand(all, 10, 6, 100), ResourceError);
}
