#include "quadl/randmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quadl/arith.hpp"
#include "quadl/error.hpp"
#include "quadl/rng.hpp"

namespace quadl {
namespace {

constexpr double kThetaSlope = 1.01624;  // theta(t) <= 1.01624 t for all t > 0
constexpr std::uint64_t kGaussianStream = ~std::uint64_t{0};
constexpr std::uint64_t kExplicitTailLimit = std::uint64_t{1} << 24;

void check_z(double z) {
    if (!(z > 0.5 && z <= 1)) throw DomainError("z must lie in (1/2, 1]");
}

}  // namespace

int three_point_draw(std::uint64_t p, double u) {
    if (p == 2) return 0;
    double pd = static_cast<double>(p);
    double zero = 1 / (pd + 1);
    double plus = (pd + 2) / (2 * (pd + 1));
    if (u < zero) return 0;
    return u < plus ? 1 : -1;
}

RandomAssignment::RandomAssignment(std::uint64_t seed, std::uint64_t cutoff) : seed_(seed), cutoff_(cutoff) {
    if (cutoff < 3) throw DomainError("random assignment needs P >= 3");
    primes_ = std::make_shared<const std::vector<std::uint32_t>>(primes_up_to(cutoff));
    values_.resize(primes_->size());
    for (std::size_t i = 0; i < primes_->size(); ++i) {
        values_[i] = static_cast<std::int8_t>(three_point_draw((*primes_)[i], to_unit(counter_hash(seed, i, 0))));
    }
}

RandomAssignment RandomAssignment::with_values(std::uint64_t cutoff, const std::vector<std::int8_t>& values) {
    RandomAssignment a;
    a.cutoff_ = cutoff;
    a.primes_ = std::make_shared<const std::vector<std::uint32_t>>(primes_up_to(cutoff));
    if (values.size() != a.primes_->size()) throw DomainError("with_values: one value per prime required");
    a.values_ = values;
    if (!a.values_.empty()) a.values_[0] = 0;  // X(2) = 0 regardless
    return a;
}

int RandomAssignment::at(std::uint64_t p) const {
    auto it = std::lower_bound(primes_->begin(), primes_->end(), p);
    if (it == primes_->end() || *it != p) throw DomainError("X(p) queried at a non-prime or beyond the cutoff");
    return values_[static_cast<std::size_t>(it - primes_->begin())];
}

RandomAssignment sample_assignment(std::uint64_t seed, std::uint64_t cutoff) {
    return RandomAssignment(seed, cutoff);
}

int X_of(std::uint64_t n, const RandomAssignment& a) {
    if (n == 0) throw DomainError("X_of: n must be positive");
    int v = 1;
    for (auto [p, e] : factorize(n)) {
        if (p > a.cutoff()) throw DomainError("X_of: prime factor exceeds the assignment cutoff");
        int x = a.at(p);
        for (int i = 0; i < e; ++i) v *= x;
    }
    return v;
}

mpq_class expect_X(std::uint64_t n) {
    if (n == 0) throw DomainError("expect_X: n must be positive");
    mpq_class r(1);
    for (auto [p, e] : factorize(n)) {
        if (p == 2 || e % 2 == 1) return mpq_class(0);
        r *= mpq_class(mpz_class(p), mpz_class(p + 1));
    }
    r.canonicalize();
    return r;
}

double rand_tail_rms_bound(double z, std::uint64_t cutoff) {
    check_z(z);
    if (cutoff < 3) throw DomainError("rand_tail_rms_bound: cutoff must be >= 3");
    const double P = static_cast<double>(cutoff);
    const double lp = std::log(P);
    const double a = 2 * z - 1;
    const double pz = std::pow(P, -z);
    // second moment: g(t) = log t/(t^z - 1)^2
    double g2 = lp / ((1 / pz - 1) * (1 / pz - 1));
    double int2 = std::pow(P, -a) * (lp / a + 1 / (a * a)) / ((1 - pz) * (1 - pz));
    double s2 = kThetaSlope * (P * g2 + int2);
    // mean: g(t) = 1/(t^{2z} - 1)
    double p2z = std::pow(P, 2 * z);
    double m = kThetaSlope * (P / (p2z - 1) + std::pow(P, -a) / (a * (1 - 1 / p2z)));
    return std::sqrt(s2 + m * m);
}

RandSeries sample_L_rand(double z, const RandomAssignment& a, double tolerance) {
    check_z(z);
    RandSeries r;
    r.z = z;
    r.cutoff = a.cutoff();
    const auto& primes = a.primes();
    const auto& vals = a.values();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (vals[i] == 0) continue;
        double p = primes[i];
        double x = vals[i];
        r.value += x * std::log(p) / (std::pow(p, z) - x);
    }
    r.tail_bound = rand_tail_rms_bound(z, a.cutoff());
    if (r.tail_bound > tolerance) {
        std::uint64_t suggest = a.cutoff();
        while (rand_tail_rms_bound(z, suggest) > tolerance && suggest < (std::uint64_t{1} << 50)) suggest *= 2;
        throw TruncationError("random series tail exceeds tolerance", suggest);
    }
    return r;
}

TailMoments rand_tail_moments(double z, std::uint64_t lo) {
    check_z(z);
    TailMoments t;
    const std::uint64_t hi = std::max(lo, kExplicitTailLimit);
    for (auto p32 : primes_up_to(hi)) {
        if (p32 <= lo || p32 == 2) continue;
        double p = p32, lp = std::log(p), pz = std::pow(p, z);
        double w = p / (2 * (p + 1));
        double tp = lp / (pz - 1), tm = -lp / (pz + 1);
        double mean = w * (tp + tm);
        t.mean += mean;
        t.variance += w * (tp * tp + tm * tm) - mean * mean;
    }
    // Beyond the explicit range use prime density 1/log t.
    const double Q = static_cast<double>(hi), a = 2 * z - 1, lq = std::log(Q);
    t.mean += std::pow(Q, -a) / a;
    t.variance += std::pow(Q, -a) * (lq / a + 1 / (a * a));
    return t;
}

RandSampler::RandSampler(double z, std::uint64_t exact_cutoff) : z_(z), cutoff_(exact_cutoff) {
    check_z(z);
    primes_ = primes_up_to(exact_cutoff);
    for (auto p32 : primes_) {
        double p = p32;
        if (p32 == 2) {
            p_zero_.push_back(1.0);
            p_plus_.push_back(1.0);
            t_plus_.push_back(0);
            t_minus_.push_back(0);
            continue;
        }
        double lp = std::log(p), pz = std::pow(p, z);
        p_zero_.push_back(1 / (p + 1));
        p_plus_.push_back((p + 2) / (2 * (p + 1)));
        t_plus_.push_back(lp / (pz - 1));
        t_minus_.push_back(-lp / (pz + 1));
    }
    tail_ = rand_tail_moments(z, exact_cutoff);
}

double RandSampler::draw(std::uint64_t seed, std::uint64_t index) const {
    double v = 0;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        double u = to_unit(counter_hash(seed, i, index));
        if (u < p_zero_[i]) continue;
        v += u < p_plus_[i] ? t_plus_[i] : t_minus_[i];
    }
    return v + tail_.mean + std::sqrt(tail_.variance) * counter_normal(seed, kGaussianStream, index);
}

cplx RandSampler::characteristic(double w) const {
    cplx acc = 1;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        double pz = p_zero_[i], pp = p_plus_[i] - p_zero_[i], pm = 1 - p_plus_[i];
        acc *= pz + pp * std::polar(1.0, w * t_plus_[i]) + pm * std::polar(1.0, w * t_minus_[i]);
    }
    return acc * std::exp(cplx(-0.5 * w * w * tail_.variance, w * tail_.mean));
}

double RandSampler::mean() const {
    double m = 0;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        double pp = p_plus_[i] - p_zero_[i], pm = 1 - p_plus_[i];
        m += pp * t_plus_[i] + pm * t_minus_[i];
    }
    return m + tail_.mean;
}

CharFnEstimate char_fn_rand(double z, double u, std::uint64_t n_samples, std::uint64_t seed,
                            std::uint64_t exact_cutoff) {
    if (n_samples < 1) throw DomainError("char_fn_rand: need at least one sample");
    RandSampler sampler(z, exact_cutoff);
    const double scale = 2 * std::numbers::pi * u * (z - 0.5);
    cplx acc = 0;
    for (std::uint64_t k = 0; k < n_samples; ++k) acc += std::polar(1.0, scale * sampler.draw(seed, k));
    CharFnEstimate e;
    e.value = acc / static_cast<double>(n_samples);
    double var = std::max(0.0, 1 - std::norm(e.value));
    e.std_error = std::sqrt(var / static_cast<double>(n_samples));
    return e;
}

namespace {

struct MomentExpansion {
    std::vector<mpq_class> coef;             // b(n) on the support
    std::vector<std::vector<int>> exps;      // exponent vector of n over primes <= Y
    std::vector<std::uint64_t> primes;
    std::vector<mpz_class> fact;
    int k = 0;
    mpq_class total = 0;

    void run(std::size_t i, int rem, const mpq_class& acc, std::vector<int>& e, const mpz_class& denom) {
        if (i == coef.size()) {
            if (rem != 0) return;
            mpq_class ex(1);
            for (std::size_t j = 0; j < primes.size(); ++j) {
                if (e[j] == 0) continue;
                if (primes[j] == 2 || e[j] % 2 == 1) return;
                ex *= mpq_class(mpz_class(primes[j]), mpz_class(primes[j] + 1));
            }
            mpq_class term = acc * ex * mpq_class(fact[k], denom);
            total += term;
            return;
        }
        mpq_class a = acc;
        for (int c = 0; c <= rem; ++c) {
            if (c > 0) {
                a *= coef[i];
                for (std::size_t j = 0; j < primes.size(); ++j) e[j] += exps[i][j];
            }
            run(i + 1, rem - c, a, e, denom * fact[c]);
        }
        for (std::size_t j = 0; j < primes.size(); ++j) e[j] -= rem * exps[i][j];
    }
};

}  // namespace

mpq_class moment_rand(const std::map<std::uint64_t, mpq_class>& b, std::uint64_t Y, int k, std::uint64_t budget,
                      std::uint64_t y_cap) {
    if (Y < 1 || Y > y_cap) throw DomainError("moment_rand: Y outside the feasibility cap");
    if (k < 0 || k > 6) throw DomainError("moment_rand: k must lie in [0, 6]");
    MomentExpansion m;
    m.k = k;
    for (auto p : primes_up_to(Y)) m.primes.push_back(p);
    for (const auto& [n, v] : b) {
        if (n < 1 || n > Y) throw DomainError("moment_rand: coefficient index outside [1, Y]");
        if (v == 0) continue;
        m.coef.push_back(v);
        std::vector<int> e(m.primes.size(), 0);
        for (auto [p, a] : factorize(n)) {
            auto it = std::find(m.primes.begin(), m.primes.end(), p);
            e[static_cast<std::size_t>(it - m.primes.begin())] = a;
        }
        m.exps.push_back(std::move(e));
    }
    if (k == 0) return mpq_class(1);
    if (m.coef.empty()) return mpq_class(0);
    // number of multisets C(|S| + k - 1, k)
    mpz_class terms;
    mpz_bin_uiui(terms.get_mpz_t(), m.coef.size() + k - 1, static_cast<unsigned long>(k));
    if (terms > budget) throw ResourceError("moment_rand: expansion exceeds budget", terms.get_ui());
    m.fact.resize(k + 1);
    m.fact[0] = 1;
    for (int i = 1; i <= k; ++i) m.fact[i] = m.fact[i - 1] * i;
    std::vector<int> e(m.primes.size(), 0);
    m.run(0, k, mpq_class(1), e, mpz_class(1));
    m.total.canonicalize();
    return m.total;
}

}  // namespace quadl
