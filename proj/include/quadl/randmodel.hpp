#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "quadl/special.hpp"

namespace quadl {

/// One realization of the random multiplicative function on primes p <= P.
/// X(2) = 0; for odd p, X(p) = +1 or -1 with probability p/(2(p+1)) each and 0 with 1/(p+1).
class RandomAssignment {
public:
    RandomAssignment(std::uint64_t seed, std::uint64_t cutoff);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t cutoff() const noexcept { return cutoff_; }
    const std::vector<std::uint32_t>& primes() const noexcept { return *primes_; }
    const std::vector<std::int8_t>& values() const noexcept { return values_; }

    /// X(p) for a prime p <= P; throws DomainError for composites or p > P.
    int at(std::uint64_t p) const;

    /// Assignment with prescribed values (used by tests): values[i] belongs to primes()[i].
    static RandomAssignment with_values(std::uint64_t cutoff, const std::vector<std::int8_t>& values);

private:
    RandomAssignment() = default;
    std::uint64_t seed_ = 0;
    std::uint64_t cutoff_ = 0;
    std::shared_ptr<const std::vector<std::uint32_t>> primes_;
    std::vector<std::int8_t> values_;
};

/// Three-point draw for the prime p using uniform u in [0, 1).
int three_point_draw(std::uint64_t p, double u);

RandomAssignment sample_assignment(std::uint64_t seed, std::uint64_t cutoff);

/// X(n) extended completely multiplicatively; throws DomainError if a prime factor exceeds P.
int X_of(std::uint64_t n, const RandomAssignment& a);

/// Exact E[X(n)].
mpq_class expect_X(std::uint64_t n);

struct RandSeries {
    double z = 0;
    std::uint64_t cutoff = 0;
    double value = 0;
    double tail_bound = 0;
};

/// Root-mean-square majorant of the omitted tail sum_{p > P} X(p) log p/(p^z - X(p)).
/// The series does not converge absolutely for z <= 1, so a pointwise bound does not exist;
/// the majorant bounds sqrt(E[tail^2]) via theta(t) <= 1.01624 t and partial summation.
double rand_tail_rms_bound(double z, std::uint64_t cutoff);

/// sum_{2 < p <= P} X(p) log p/(p^z - X(p)) for the assignment. Throws TruncationError with a
/// suggested cutoff when the tail majorant exceeds `tolerance`.
RandSeries sample_L_rand(double z, const RandomAssignment& a, double tolerance = INFINITY);

/// Exact mean and variance of the terms over primes in (lo, inf).
struct TailMoments {
    double mean = 0;
    double variance = 0;
};
TailMoments rand_tail_moments(double z, std::uint64_t lo);

/// Monte Carlo sampler of L_rand(z): exact three-point draws for p <= exact_cutoff plus a
/// Gaussian with the exact mean and variance of the remaining primes.
class RandSampler {
public:
    RandSampler(double z, std::uint64_t exact_cutoff = 8192);

    double z() const noexcept { return z_; }
    std::uint64_t exact_cutoff() const noexcept { return cutoff_; }
    const TailMoments& tail() const noexcept { return tail_; }

    /// Draw number `index` of the stream named by `seed`.
    double draw(std::uint64_t seed, std::uint64_t index) const;

    /// Exact characteristic function E[exp(i w L_rand)] of the same model.
    cplx characteristic(double w) const;

    /// Exact mean of L_rand(z).
    double mean() const;

private:
    double z_;
    std::uint64_t cutoff_;
    std::vector<std::uint32_t> primes_;
    std::vector<double> p_zero_;  // P(X = 0)
    std::vector<double> p_plus_;  // P(X = 0) + P(X = 1)
    std::vector<double> t_plus_, t_minus_;
    TailMoments tail_;
};

struct CharFnEstimate {
    cplx value;
    double std_error = 0;
};

/// Monte Carlo E[exp(2 pi i u L_rand(z)/V_z)].
CharFnEstimate char_fn_rand(double z, double u, std::uint64_t n_samples, std::uint64_t seed,
                            std::uint64_t exact_cutoff = 8192);

/// Exact E[(sum_{n <= Y} b(n) X(n))^k]; b maps n to a rational coefficient (absent = 0).
/// Throws ResourceError when the multiset expansion exceeds `budget` terms.
mpq_class moment_rand(const std::map<std::uint64_t, mpq_class>& b, std::uint64_t Y, int k,
                      std::uint64_t budget = 5'000'000, std::uint64_t y_cap = 30);

}  // namespace quadl
