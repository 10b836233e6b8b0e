#include "quadl/arith.hpp"

#include <algorithm>
#include <cmath>

#include "quadl/error.hpp"

namespace quadl {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

std::vector<std::uint8_t> squarefree_mask(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) return {};
    std::vector<std::uint8_t> mask(hi - lo + 1, 1);
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
    for (auto p : primes_up_to(root)) {
        std::uint64_t q = std::uint64_t{p} * p;
        if (q > hi) break;
        for (std::uint64_t j = (lo + q - 1) / q * q; j <= hi; j += q) mask[j - lo] = 0;
    }
    if (lo == 0) mask[0] = 0;
    return mask;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return false;
    }
    return true;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> f;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

double von_mangoldt(std::uint64_t n) {
    if (n < 2) return 0.0;
    auto f = factorize(n);
    return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

std::vector<PrimePower> prime_powers_up_to(std::uint64_t limit) {
    std::vector<PrimePower> out;
    if (limit < 2) return out;
    for (auto p32 : primes_up_to(limit)) {
        std::uint64_t p = p32;
        double lp = std::log(static_cast<double>(p));
        std::uint64_t q = p;
        for (int k = 1;; ++k) {
            out.push_back({q, p, k, lp});
            if (q > limit / p) break;
            q *= p;
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
    return out;
}

int jacobi(std::int64_t a, std::uint64_t n) {
    if (n == 0 || n % 2 == 0) throw DomainError("jacobi: modulus must be odd and positive");
    std::int64_t sn = static_cast<std::int64_t>(n);
    std::uint64_t x = static_cast<std::uint64_t>(((a % sn) + sn) % sn);
    int t = 1;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            std::uint64_t r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(x, n);
        if (x % 4 == 3 && n % 4 == 3) t = -t;
        x %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace quadl
