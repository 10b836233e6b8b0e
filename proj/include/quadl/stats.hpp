#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "quadl/characters.hpp"
#include "quadl/selberg.hpp"
#include "quadl/zeros.hpp"

namespace quadl {

/// How nu(x) is chosen: log log x, (log log x)^{1/5}, or a fixed value.
struct NuPolicy {
    enum class Kind { Auto, Hyp, Explicit } kind = Kind::Auto;
    double value = 0;

    double resolve(double x) const;
    std::string str() const;
    static NuPolicy parse(const std::string& s);
};

/// Deterministic subsample of the family: members ranked by a seeded hash, the first n kept,
/// returned in ascending d. n = 0 or n >= |D(x)| returns the whole family.
std::vector<Discriminant> sample_family(const Family& family, std::size_t n, std::uint64_t seed);

/// (1/|D(x)|) sum_d (sum_{n <= Y} b(n) chi_d(n))^k. Requires k <= log x / log Y.
double moment_lhs(const Family& family, const std::map<std::uint64_t, double>& b, std::uint64_t Y, int k);

struct LargeSieveReport {
    int k = 0;
    double lhs = 0;
    double log_lhs = 0;
    double prime_term = 0;    // (20k sum_{y<=p<=z} |a(p)|^2 log^2 p / p)^k
    double square_term = 0;   // (3 sum_{sqrt y<=p<=sqrt z} |a(p^2)| log p / p)^{2k}
    double c0_term = 0;       // (c0 y^{-1/3})^k with c0 = 1
    double rhs = 0;
    double ratio = 0;         // lhs / rhs
    double k_cap = 0;         // log x / (10 log z)
    bool in_range = true;
};

/// (1/|D(x)|) sum_d |sum_{y<=n<=z} a(n) Lambda(n) chi_d(n)/sqrt n|^{2k} against the three-term
/// bound. With enforce_range the cap k <= log x/(10 log z) is a DomainError; otherwise it is
/// reported through in_range.
LargeSieveReport large_sieve_check(const Family& family, const std::function<double(std::uint64_t)>& a,
                                   double y_lo, double z_hi, int k, bool enforce_range = true);

/// Exact two-sample sup distance between empirical CDFs of sorted samples.
double two_sample_distance(const std::vector<double>& a, const std::vector<double>& b);

struct DistributionOptions {
    double c = 20;             // y = exp(c V_z log(log x / V_z))
    SigmaOptions sigma;
    unsigned threads = 1;
};

struct MemberValue {
    std::uint64_t d;
    double value;              // -L'/L(z) / V_z
};

struct Exclusion {
    std::uint64_t d;
    std::string reason;
};

struct EmpiricalDistribution {
    double x = 0, z = 0, V = 0, log_y = 0;
    std::size_t considered = 0;
    std::vector<MemberValue> members;  // ascending d
    std::vector<double> sorted_values;
    std::vector<Exclusion> excluded;
};

/// -L'/L(z, chi_d)/V_z over the sample, keeping d with sigma_{y,d} at its default value.
/// Requires 1/2 + log log x / log x <= z <= 1.
EmpiricalDistribution empirical_distribution(const std::vector<Discriminant>& sample, double x, double z,
                                             const DistributionOptions& opt = {});

struct DiscrepancyReport {
    double x = 0, z = 0, V = 0;
    std::vector<double> family_values;  // sorted
    std::vector<double> mc_values;      // sorted
    double D = 0;
    double theory_bound = 0;            // sqrt(V log(log x / V) / log x)
    double ratio = 0;
};

/// Monte Carlo draws of L_rand(z)/V_z, index i drawn from counter i of the seed.
std::vector<double> rand_model_sample(double z, std::uint64_t n, std::uint64_t seed, unsigned threads = 1);

double discrepancy_theory_bound(double x, double z);

/// Two-sample discrepancy between the family distribution and the random model.
/// Requires mc_samples >= 10^4 and a nonempty family.
DiscrepancyReport discrepancy(const EmpiricalDistribution& family, std::uint64_t mc_samples, std::uint64_t seed,
                              unsigned threads = 1);

struct RestrictedValue {
    std::uint64_t d;
    cplx value;                 // -L'/L(s)
};

struct RestrictedFamily {
    double x = 0, nu = 0, nu_hyp = 0, log_y = 0;
    cplx s;
    std::size_t family_size = 0;
    std::vector<RestrictedValue> members;
    std::vector<Exclusion> excluded;
};

/// The d of the sample passing Hypothesis L_d (at nu capped to (log log x)^{1/5}) with
/// sigma_{y,d} at default for y = x^{4/nu}, together with -L'/L(s).
RestrictedFamily restricted_family(const std::vector<Discriminant>& sample, std::size_t family_size, double x,
                                   double nu, cplx s, const SigmaOptions& sigma = {}, unsigned threads = 1);

struct CentralMomentReport {
    int k = 0;
    double moment = 0;          // (1/|D(x)|) sum |L_d(s)|^{2k} over the restricted set
    double mean_abs = 0;        // (1/|D(x)|) sum |L_d(s)| for the k = 1 power-mean check
    double envelope4 = 0;       // nu^{4k} (k log^2 x)^k
    double envelope8 = 0;       // nu^{8k} (k log^2 x)^k
    double ratio4 = 0, ratio8 = 0;
    double k_cap = 0;           // nu / 20
    bool in_range = false;
};

CentralMomentReport central_moments(const RestrictedFamily& family, int k);

struct RdSample {
    std::uint64_t d = 0;
    int count = 0;
    int suspects = 0;
    bool lower_bound_only = false;
    int near_count = -1;        // R_d(1/2, s0) when Hypothesis L_d holds, -1 otherwise
    std::string note;
};

struct RdRow {
    double x = 0, nu = 0, sigma1 = 0;
    std::size_t family_size = 0;
    std::vector<RdSample> samples;
    double mean = 0, sd = 0, se = 0;
    int max = 0;
    int flagged = 0;            // samples with suspects or lower_bound_only
    std::map<int, int> histogram;
    double loglog = 0, loglog_logloglog = 0;
    long near_sum = 0, away_sum = 0;
};

struct RdOptions {
    NuPolicy nu;
    std::size_t sample_size = 200;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool near_split = false;
    RealZeroOptions zeros;
};

std::vector<RdRow> rd_statistics(const std::vector<double>& x_list, const RdOptions& opt);

}  // namespace quadl
