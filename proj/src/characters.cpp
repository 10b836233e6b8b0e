#include "quadl/characters.hpp"

#include <cmath>
#include <ostream>

#include "quadl/arith.hpp"
#include "quadl/error.hpp"

namespace quadl {

int kronecker(std::int64_t d, std::uint64_t n) {
    if (n == 0) throw DomainError("kronecker: n must be positive");
    int sign = 1;
    while (n % 2 == 0) {
        if (d % 2 == 0) return 0;
        std::int64_t r = ((d % 8) + 8) % 8;
        if (r == 3 || r == 5) sign = -sign;
        n /= 2;
    }
    if (n == 1) return sign;
    return sign * jacobi(d, n);
}

Discriminant make_discriminant(std::uint64_t d) {
    if (d == 0 || d % 8 != 0) throw DomainError("discriminant must be 8m");
    std::uint64_t m = d / 8;
    if (m % 2 == 0 || !is_squarefree(m)) throw DomainError("discriminant 8m needs m odd squarefree");
    return {d, m};
}

CharTable::CharTable(std::int64_t d, std::uint64_t table_limit) : d_(d) {
    if (d == 0) throw DomainError("character modulus must be nonzero");
    auto q = static_cast<std::uint64_t>(d < 0 ? -d : d);
    if (q > table_limit) return;
    table_.resize(q);
    table_[0] = static_cast<std::int8_t>(q == 1 ? 1 : 0);
    for (std::uint64_t n = 1; n < q; ++n) table_[n] = static_cast<std::int8_t>(kronecker(d, n));
}

Family enumerate_family(double x) {
    if (!(x >= 2)) throw DomainError("enumerate_family requires x >= 2");
    Family fam;
    fam.x = x;
    auto lo = static_cast<std::uint64_t>(std::ceil(x / 2));
    auto hi = static_cast<std::uint64_t>(std::floor(x));
    auto mask = squarefree_mask(lo, hi);
    for (std::uint64_t m = lo; m <= hi; ++m) {
        if (m % 2 == 1 && mask[m - lo]) fam.members.push_back({8 * m, m});
    }
    return fam;
}

double char_average(const Family& family, std::uint64_t n) {
    if (family.members.empty()) throw DomainError("char_average: empty family");
    if (n == 0 || static_cast<double>(n) > family.x) throw DomainError("char_average: need 1 <= n <= x");
    long long sum = 0;
    for (const auto& d : family.members) sum += kronecker(static_cast<std::int64_t>(d.d), n);
    return static_cast<double>(sum) / static_cast<double>(family.members.size());
}

void write_family_csv(std::ostream& os, const Family& family) {
    os << "d,m\n";
    for (const auto& d : family.members) os << d.d << ',' << d.m << '\n';
}

}  // namespace quadl
