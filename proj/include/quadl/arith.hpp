#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace quadl {

/// Primes p <= n, ascending (plain sieve of Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

/// mask[i] != 0 iff lo + i is squarefree, for lo + i in [lo, hi].
/// Segmented: multiples of p^2 are struck out for every p^2 <= hi.
std::vector<std::uint8_t> squarefree_mask(std::uint64_t lo, std::uint64_t hi);

/// Trial-division squarefree test; kept independent of the sieve so the two can check each other.
bool is_squarefree(std::uint64_t n);

/// Prime factorization by trial division, ascending primes with exponents.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

/// von Mangoldt function.
double von_mangoldt(std::uint64_t n);

struct PrimePower {
    std::uint64_t n;  // p^k
    std::uint64_t p;
    int k;
    double log_p;
};

/// All prime powers p^k <= limit, sorted by value.
std::vector<PrimePower> prime_powers_up_to(std::uint64_t limit);

/// Jacobi symbol (a/n) for odd n >= 1.
int jacobi(std::int64_t a, std::uint64_t n);

}  // namespace quadl
