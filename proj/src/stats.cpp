#include "quadl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "quadl/arith.hpp"
#include "quadl/error.hpp"
#include "quadl/parallel.hpp"
#include "quadl/randmodel.hpp"
#include "quadl/rng.hpp"

namespace quadl {

double NuPolicy::resolve(double x) const {
    const double ll = std::log(std::log(x));
    switch (kind) {
        case Kind::Auto: return ll;
        case Kind::Hyp: return std::pow(ll, 0.2);
        case Kind::Explicit: return value;
    }
    return ll;
}

std::string NuPolicy::str() const {
    if (kind == Kind::Auto) return "auto";
    if (kind == Kind::Hyp) return "hyp";
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

NuPolicy NuPolicy::parse(const std::string& s) {
    if (s == "auto") return {};
    if (s == "hyp") return {Kind::Hyp, 0};
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(v > 0)) throw DomainError("nu policy must be auto, hyp or a positive number");
    return {Kind::Explicit, v};
}

std::vector<Discriminant> sample_family(const Family& family, std::size_t n, std::uint64_t seed) {
    if (n == 0 || n >= family.size()) return family.members;
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
    keyed.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i)
        keyed.emplace_back(counter_hash(seed, 0x5a4d504c, family.members[i].d), i);
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(n), keyed.end());
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx.push_back(keyed[i].second);
    std::sort(idx.begin(), idx.end());
    std::vector<Discriminant> out;
    for (auto i : idx) out.push_back(family.members[i]);
    return out;
}

double moment_lhs(const Family& family, const std::map<std::uint64_t, double>& b, std::uint64_t Y, int k) {
    if (family.size() == 0) throw DomainError("moment_lhs: empty family");
    if (k < 0 || Y < 1) throw DomainError("moment_lhs: need k >= 0 and Y >= 1");
    if (Y >= 2 && static_cast<double>(k) > std::log(family.x) / std::log(static_cast<double>(Y)))
        throw DomainError("moment_lhs: k exceeds log x / log Y");
    for (const auto& [n, v] : b)
        if (n < 1 || n > Y) throw DomainError("moment_lhs: coefficient index outside [1, Y]");
    double total = 0;
    for (const auto& disc : family.members) {
        double s = 0;
        for (const auto& [n, v] : b) s += v * kronecker(static_cast<std::int64_t>(disc.d), n);
        total += std::pow(s, k);
    }
    return total / static_cast<double>(family.size());
}

LargeSieveReport large_sieve_check(const Family& family, const std::function<double(std::uint64_t)>& a,
                                   double y_lo, double z_hi, int k, bool enforce_range) {
    if (family.size() == 0) throw DomainError("large_sieve_check: empty family");
    if (!(y_lo >= 10 && z_hi >= y_lo) || k < 1) throw DomainError("large_sieve_check: need 10 <= y <= z and k >= 1");
    LargeSieveReport r;
    r.k = k;
    r.k_cap = std::log(family.x) / (10 * std::log(z_hi));
    r.in_range = k <= r.k_cap;
    if (enforce_range && !r.in_range) throw DomainError("large_sieve_check: k exceeds log x/(10 log z)");

    const auto lo = static_cast<std::uint64_t>(std::ceil(y_lo));
    const auto hi = static_cast<std::uint64_t>(std::floor(z_hi));
    std::vector<PrimePower> terms;
    for (const auto& pp : prime_powers_up_to(hi))
        if (pp.n >= lo) terms.push_back(pp);
    std::vector<double> weight(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double an = a(terms[i].n);
        if (std::abs(an) > 1) throw DomainError("large_sieve_check: |a(n)| must not exceed 1");
        weight[i] = an * terms[i].log_p / std::sqrt(static_cast<double>(terms[i].n));
    }

    // log-domain mean of |S_d|^{2k}
    double log_max = -INFINITY;
    std::vector<double> logs;
    logs.reserve(family.size());
    for (const auto& disc : family.members) {
        double s = 0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (weight[i] == 0) continue;
            int c = kronecker(static_cast<std::int64_t>(disc.d), terms[i].n);
            s += c * weight[i];
        }
        double l = 2.0 * k * std::log(std::abs(s));
        logs.push_back(l);
        log_max = std::max(log_max, l);
    }
    if (log_max == -INFINITY) {
        r.log_lhs = -INFINITY;
        r.lhs = 0;
    } else {
        double acc = 0;
        for (double l : logs) acc += std::exp(l - log_max);
        r.log_lhs = log_max + std::log(acc / static_cast<double>(family.size()));
        r.lhs = std::exp(r.log_lhs);
    }

    double sp = 0, sq = 0;
    for (auto p : primes_up_to(hi)) {
        const double pd = p, lp = std::log(pd);
        if (pd >= y_lo && pd <= z_hi) {
            double ap = a(p);
            sp += ap * ap * lp * lp / pd;
        }
        if (pd >= std::sqrt(y_lo) && pd <= std::sqrt(z_hi)) sq += std::abs(a(std::uint64_t{p} * p)) * lp / pd;
    }
    r.prime_term = std::pow(20.0 * k * sp, k);
    r.square_term = std::pow(3 * sq, 2 * k);
    r.c0_term = std::pow(std::cbrt(1 / y_lo), k);
    r.rhs = r.prime_term + r.square_term + r.c0_term;
    r.ratio = r.lhs / r.rhs;
    return r;
}

double two_sample_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw DomainError("two_sample_distance: empty sample");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double best = 0;
    while (i < a.size() || j < b.size()) {
        double t;
        if (j == b.size() || (i < a.size() && a[i] <= b[j])) t = a[i];
        else t = b[j];
        while (i < a.size() && a[i] == t) ++i;
        while (j < b.size() && b[j] == t) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return best;
}

EmpiricalDistribution empirical_distribution(const std::vector<Discriminant>& sample, double x, double z,
                                             const DistributionOptions& opt) {
    const double lx = std::log(x);
    if (!(z <= 1 && z >= 0.5 + std::log(lx) / lx)) throw DomainError("empirical_distribution: z out of range");
    EmpiricalDistribution out;
    out.x = x;
    out.z = z;
    out.V = v_norm(cplx(z, 0));
    out.log_y = opt.c * out.V * std::log(lx / out.V);
    out.considered = sample.size();
    const double y = std::exp(out.log_y);

    std::vector<std::optional<double>> value(sample.size());
    std::vector<std::string> reason(sample.size());
    parallel_for(sample.size(), opt.threads, [&](std::size_t i) {
        LEngine engine(sample[i]);
        try {
            auto sg = sigma_y_d(engine, y, 0, opt.sigma);
            if (!sg.attained_by_default) {
                reason[i] = "sigma_y_d above default";
                return;
            }
            value[i] = engine.log_deriv(z).value / out.V;
        } catch (const IndeterminateError& e) {
            reason[i] = std::string("indeterminate: ") + e.what();
        } catch (const NearZeroError& e) {
            reason[i] = std::string("near zero: ") + e.what();
        }
    });
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (value[i]) out.members.push_back({sample[i].d, *value[i]});
        else out.excluded.push_back({sample[i].d, reason[i]});
    }
    for (const auto& m : out.members) out.sorted_values.push_back(m.value);
    std::sort(out.sorted_values.begin(), out.sorted_values.end());
    return out;
}

std::vector<double> rand_model_sample(double z, std::uint64_t n, std::uint64_t seed, unsigned threads) {
    RandSampler sampler(z);
    const double V = v_norm(cplx(z, 0));
    std::vector<double> out(n);
    constexpr std::size_t chunk = 1024;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min<std::size_t>(n, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) out[i] = sampler.draw(seed, i) / V;
    });
    return out;
}

double discrepancy_theory_bound(double x, double z) {
    const double V = v_norm(cplx(z, 0)), lx = std::log(x);
    return std::sqrt(V * std::log(lx / V) / lx);
}

DiscrepancyReport discrepancy(const EmpiricalDistribution& family, std::uint64_t mc_samples, std::uint64_t seed,
                              unsigned threads) {
    if (mc_samples < 10000) throw DomainError("discrepancy: need at least 10^4 Monte Carlo samples");
    if (family.sorted_values.empty()) throw DomainError("discrepancy: empty family after exclusions");
    DiscrepancyReport r;
    r.x = family.x;
    r.z = family.z;
    r.V = family.V;
    r.family_values = family.sorted_values;
    r.mc_values = rand_model_sample(family.z, mc_samples, seed, threads);
    std::sort(r.mc_values.begin(), r.mc_values.end());
    r.D = two_sample_distance(r.family_values, r.mc_values);
    r.theory_bound = discrepancy_theory_bound(family.x, family.z);
    r.ratio = r.D / r.theory_bound;
    return r;
}

RestrictedFamily restricted_family(const std::vector<Discriminant>& sample, std::size_t family_size, double x,
                                   double nu, cplx s, const SigmaOptions& sigma, unsigned threads) {
    RestrictedFamily out;
    const double lx = std::log(x);
    out.x = x;
    out.nu = nu;
    out.nu_hyp = std::min(nu, std::pow(std::log(lx), 0.2));
    out.log_y = 4 * lx / nu;
    out.s = s;
    out.family_size = family_size;
    const double y = std::exp(out.log_y);

    std::vector<std::optional<cplx>> value(sample.size());
    std::vector<std::string> reason(sample.size());
    parallel_for(sample.size(), threads, [&](std::size_t i) {
        LEngine engine(sample[i]);
        try {
            auto h = hypothesis_Ld_check(engine, x, out.nu_hyp);
            if (!h.holds) {
                reason[i] = "hypothesis L_d fails";
                return;
            }
            auto sg = sigma_y_d(engine, y, 0, sigma);
            if (!sg.attained_by_default) {
                reason[i] = "sigma_y_d above default";
                return;
            }
            value[i] = engine.log_deriv(s).value;
        } catch (const IndeterminateError& e) {
            reason[i] = std::string("indeterminate: ") + e.what();
        } catch (const NearZeroError& e) {
            reason[i] = std::string("near zero: ") + e.what();
        }
    });
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (value[i]) out.members.push_back({sample[i].d, *value[i]});
        else out.excluded.push_back({sample[i].d, reason[i]});
    }
    return out;
}

CentralMomentReport central_moments(const RestrictedFamily& family, int k) {
    if (family.members.empty()) throw DomainError("central_moments: empty restricted family");
    if (k < 1) throw DomainError("central_moments: k must be positive");
    CentralMomentReport r;
    r.k = k;
    const double n = static_cast<double>(family.family_size);
    for (const auto& m : family.members) {
        r.moment += std::pow(std::abs(m.value), 2 * k);
        r.mean_abs += std::abs(m.value);
    }
    r.moment /= n;
    r.mean_abs /= n;
    const double lx = std::log(family.x);
    const double base = std::pow(k * lx * lx, k);
    r.envelope4 = std::pow(family.nu, 4 * k) * base;
    r.envelope8 = std::pow(family.nu, 8 * k) * base;
    r.ratio4 = r.moment / r.envelope4;
    r.ratio8 = r.moment / r.envelope8;
    r.k_cap = family.nu / 20;
    r.in_range = k <= r.k_cap;
    return r;
}

std::vector<RdRow> rd_statistics(const std::vector<double>& x_list, const RdOptions& opt) {
    std::vector<RdRow> rows;
    for (double x : x_list) {
        if (x < 1000) throw DomainError("rd_statistics: x must be at least 1000");
        const auto family = enumerate_family(x);
        if (opt.sample_size > family.size()) throw DomainError("rd_statistics: sample larger than the family");
        RdRow row;
        row.x = x;
        row.family_size = family.size();
        row.nu = opt.nu.resolve(x);
        const double lx = std::log(x);
        row.sigma1 = 0.5 + row.nu / lx;
        row.loglog = std::log(lx);
        row.loglog_logloglog = row.loglog * std::log(row.loglog);
        const auto sample = sample_family(family, opt.sample_size, opt.seed);
        row.samples.resize(sample.size());
        const double nu_hyp = std::min(row.nu, std::pow(row.loglog, 0.2));
        parallel_for(sample.size(), opt.threads, [&](std::size_t i) {
            LEngine engine(sample[i]);
            RdSample& s = row.samples[i];
            s.d = sample[i].d;
            auto rec = count_real_zeros(engine, std::min(row.sigma1, 1.0), 1.0, opt.zeros);
            s.count = rec.count;
            s.suspects = static_cast<int>(rec.suspects.size());
            s.lower_bound_only = rec.lower_bound_only;
            if (!opt.near_split) return;
            try {
                if (hypothesis_Ld_check(engine, x, nu_hyp).holds) {
                    auto near = count_real_zeros(engine, 0.5, std::min(row.sigma1, 1.0), opt.zeros);
                    s.near_count = near.count;
                } else {
                    s.note = "hypothesis fails";
                }
            } catch (const IndeterminateError& e) {
                s.note = "hypothesis indeterminate";
            }
        });
        double sum = 0, sum2 = 0;
        for (const auto& s : row.samples) {
            sum += s.count;
            sum2 += static_cast<double>(s.count) * s.count;
            row.max = std::max(row.max, s.count);
            row.histogram[s.count]++;
            if (s.suspects > 0 || s.lower_bound_only) row.flagged++;
            if (s.near_count >= 0) {
                row.near_sum += s.near_count;
                row.away_sum += s.count;
            }
        }
        const double n = static_cast<double>(row.samples.size());
        if (n > 0) {
            row.mean = sum / n;
            row.sd = n > 1 ? std::sqrt(std::max(0.0, (sum2 - n * row.mean * row.mean) / (n - 1))) : 0;
            row.se = row.sd / std::sqrt(n);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace quadl
