#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

namespace quadl {

/// Kronecker symbol (d/n) for n >= 1.
int kronecker(std::int64_t d, std::uint64_t n);

/// d = 8m with m odd and squarefree.
struct Discriminant {
    std::uint64_t d = 8;
    std::uint64_t m = 1;

    friend bool operator==(const Discriminant&, const Discriminant&) = default;
};

/// Validates the shape d = 8m, m odd squarefree; throws DomainError otherwise.
Discriminant make_discriminant(std::uint64_t d);

/// chi_d on the integers, with a full residue table when d is small enough.
class CharTable {
public:
    static constexpr std::uint64_t kDefaultTableLimit = 1'000'000;

    /// Accepts any d for which the Kronecker symbol defines a real character (used by
    /// the Fekete tests with d = 5 as well as the family).
    explicit CharTable(std::int64_t d, std::uint64_t table_limit = kDefaultTableLimit);

    std::int64_t modulus() const noexcept { return d_; }
    bool tabulated() const noexcept { return !table_.empty(); }

    int operator()(std::uint64_t n) const {
        if (!table_.empty()) return table_[n % table_.size()];
        return kronecker(d_, n);
    }

private:
    std::int64_t d_;
    std::vector<std::int8_t> table_;
};

struct Family {
    double x = 0;
    std::vector<Discriminant> members;

    std::size_t size() const noexcept { return members.size(); }
};

/// All d = 8m with m odd squarefree and x/2 <= m <= x, ascending. Requires x >= 2.
Family enumerate_family(double x);

/// (1/|D(x)|) sum_d chi_d(n). Requires 1 <= n <= x and a nonempty family.
double char_average(const Family& family, std::uint64_t n);

/// CSV with header "d,m".
void write_family_csv(std::ostream& os, const Family& family);

}  // namespace quadl
