#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "quadl/arith.hpp"
#include "quadl/error.hpp"
#include "quadl/fekete.hpp"
#include "quadl/harness.hpp"
#include "quadl/parallel.hpp"
#include "quadl/randmodel.hpp"

using namespace quadl;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIndeterminate = 2, kResource = 3 };

struct Global {
    std::string config_file;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    std::optional<double> eps;
    std::optional<std::string> cache_dir;
    std::optional<std::string> out;
    bool strict = false;
    bool verify_cache = false;
};

// Output goes to cfg.out when set, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw DomainError("cannot write " + path);
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

cplx parse_s(const std::string& s) {
    auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw DomainError("bad value for --s: " + s);
    }
}

std::optional<ResultStore> open_store(const RunConfig& cfg) {
    if (cfg.cache_dir.empty()) return std::nullopt;
    return ResultStore(cfg.cache_dir, cfg.verify_cache);
}

void report_indeterminate(const RunConfig& cfg, std::size_t n, const std::string& what) {
    if (n == 0) return;
    std::cerr << (cfg.strict ? "error: " : "warning: ") << n << " indeterminate result(s) in " << what << '\n';
    if (cfg.strict) throw IndeterminateError(what + ": indeterminate results under --strict");
}

int run_family(const RunConfig& cfg, double x) {
    Sink sink(cfg.out);
    sink.os() << provenance_header(cfg, "family") << '\n';
    write_family_csv(sink.os(), enumerate_family(x));
    return kOk;
}

int run_eval(const RunConfig& cfg, std::uint64_t d, const std::string& s_text, bool deriv, bool oracle) {
    EngineOptions eo;
    eo.eps_target = cfg.eps_target;
    LEngine engine(make_discriminant(d), eo);
    const cplx s = parse_s(s_text);
    Sink sink(cfg.out);
    auto& os = sink.os();
    os << provenance_header(cfg, "eval") << '\n';
    auto v = engine.l_value(s);
    os << "d=" << d << " s=" << fmt(s.real()) << ',' << fmt(s.imag()) << '\n';
    os << "L=" << fmt(v.value.real()) << ',' << fmt(v.value.imag()) << " err=" << fmt(v.err) << '\n';
    auto lam = engine.evaluate(s);
    os << "Lambda=" << fmt(lam.lambda.real()) << ',' << fmt(lam.lambda.imag()) << " err=" << fmt(lam.lambda_err)
       << '\n';
    if (deriv) {
        if (s.imag() == 0) {
            auto p = engine.l_prime(s.real());
            os << "L'=" << fmt(p.value) << " err=" << fmt(p.err) << '\n';
        } else {
            auto p = engine.l_prime(s);
            os << "L'=" << fmt(p.value.real()) << ',' << fmt(p.value.imag()) << " err=" << fmt(p.err) << '\n';
        }
    }
    if (oracle) {
        auto o = euler_maclaurin_oracle(d, s);
        os << "oracle=" << fmt(o.real()) << ',' << fmt(o.imag()) << " delta=" << fmt(std::abs(o - v.value)) << '\n';
    }
    return kOk;
}

ZeroRecord zero_record_cached(std::optional<ResultStore>& store, const Discriminant& disc, double s1, double s2,
                              const RunConfig& cfg) {
    auto compute = [&] {
        EngineOptions eo;
        eo.eps_target = cfg.eps_target;
        LEngine engine(disc, eo);
        return count_real_zeros(engine, s1, s2);
    };
    if (!store) return compute();
    std::string params = "sigma1=" + fmt(s1) + "|sigma2=" + fmt(s2) + "|eps=" + fmt(cfg.eps_target) + "|grid=0.01";
    auto j = store->load_or_compute(cache_key("zeros", disc.d, params), [&] { return to_json(compute()); });
    return zero_record_from_json(j);
}

int run_zeros(const RunConfig& cfg, double x, const std::string& sigma_min) {
    const auto family = enumerate_family(x);
    const auto sample = sample_family(family, cfg.sample_size, cfg.seed);
    const double nu = NuPolicy::parse(cfg.nu).resolve(x);
    double s1 = 0.5 + nu / std::log(x);
    if (sigma_min != "auto") s1 = parse_s(sigma_min).real();
    s1 = std::min(s1, 1.0);
    auto store = open_store(cfg);
    std::vector<ZeroRecord> records(sample.size());
    parallel_for(sample.size(), cfg.threads,
                 [&](std::size_t i) { records[i] = zero_record_cached(store, sample[i], s1, 1.0, cfg); });
    Sink sink(cfg.out);
    write_zero_jsonl(sink.os(), cfg, x, records);
    std::size_t flagged = 0;
    for (const auto& r : records) flagged += r.suspects.empty() && !r.lower_bound_only ? 0 : 1;
    report_indeterminate(cfg, flagged, "zeros");
    return kOk;
}

int run_gamma_min(const RunConfig& cfg, std::optional<std::uint64_t> d, double x, double t_max) {
    std::vector<Discriminant> sample;
    if (d) sample.push_back(make_discriminant(*d));
    else sample = sample_family(enumerate_family(x), cfg.sample_size, cfg.seed);
    auto store = open_store(cfg);
    std::vector<nlohmann::json> rows(sample.size());
    parallel_for(sample.size(), cfg.threads, [&](std::size_t i) {
        auto compute = [&] {
            LEngine engine(sample[i]);
            nlohmann::json j{{"d", sample[i].d}};
            try {
                auto g = gamma_min(engine, t_max);
                j["found"] = g.found;
                j["gamma"] = g.gamma;
                j["rectangle_count"] = g.rectangle_count;
                j["off_line"] = g.off_line;
            } catch (const IndeterminateError& e) {
                j["found"] = false;
                j["indeterminate"] = e.what();
            }
            return j;
        };
        if (store) {
            rows[i] = store->load_or_compute(cache_key("gamma-min", sample[i].d, "t_max=" + fmt(t_max)), compute);
        } else {
            rows[i] = compute();
        }
    });
    Sink sink(cfg.out);
    auto& os = sink.os();
    os << provenance_header(cfg, "gamma-min") << '\n' << "d,found,gamma,rectangle_count,off_line\n";
    std::size_t bad = 0;
    for (const auto& j : rows) {
        if (!j.contains("indeterminate") && !j["found"].get<bool>()) ++bad;
        if (j.contains("indeterminate")) {
            ++bad;
            os << j["d"].get<std::uint64_t>() << ",0,nan,-1,0\n";
            continue;
        }
        os << j["d"].get<std::uint64_t>() << ',' << (j["found"].get<bool>() ? 1 : 0) << ','
           << fmt(j["gamma"].get<double>()) << ',' << j["rectangle_count"].get<int>() << ','
           << (j["off_line"].get<bool>() ? 1 : 0) << '\n';
    }
    report_indeterminate(cfg, bad, "gamma-min");
    return kOk;
}

int run_fekete(const RunConfig& cfg, std::uint64_t d, bool count_zeros, bool check_identity, double s,
               std::size_t grid) {
    nlohmann::json j{{"d", d}};
    if (count_zeros) {
        auto r = fekete_real_zeros(d, grid);
        nlohmann::json zs = nlohmann::json::array();
        for (const auto& z : r.zeros) zs.push_back({{"lo", z.lo}, {"hi", z.hi}});
        j["count"] = r.count;
        j["lower_bound_only"] = r.lower_bound_only;
        j["grid_points"] = r.grid_points;
        j["zeros"] = zs;
        j["suspects"] = r.suspects.size();
    }
    if (check_identity) {
        auto m = mellin_identity_check(d, s);
        j["identity"] = {{"s", s},          {"lhs1", m.lhs1}, {"rhs1", m.rhs1}, {"residual1", m.residual1},
                         {"lhs2", m.lhs2}, {"rhs2", m.rhs2}, {"residual2", m.residual2}};
    }
    Sink sink(cfg.out);
    sink.os() << provenance_header(cfg, "fekete") << '\n' << j.dump() << '\n';
    return kOk;
}

int run_discrepancy(const RunConfig& cfg, const std::string& plot) {
    std::vector<DiscrepancyReport> reports;
    std::vector<EmpiricalDistribution> dists;
    DistributionOptions opt;
    opt.threads = cfg.threads;
    opt.sigma.height_cap = cfg.sigma_height_cap;
    std::size_t bad = 0;
    for (double x : cfg.x_list) {
        auto sample = sample_family(enumerate_family(x), cfg.sample_size, cfg.seed);
        dists.push_back(empirical_distribution(sample, x, cfg.z, opt));
        for (const auto& e : dists.back().excluded) bad += e.reason.rfind("indeterminate", 0) == 0;
        reports.push_back(discrepancy(dists.back(), cfg.mc_samples, cfg.seed, cfg.threads));
    }
    Sink sink(cfg.out);
    write_discrepancy_table(sink.os(), cfg, reports, dists);
    if (!plot.empty()) {
        Sink p(plot);
        write_discrepancy_plot(p.os(), cfg, reports);
    }
    report_indeterminate(cfg, bad, "discrepancy");
    return kOk;
}

int run_moments(const RunConfig& cfg, const std::string& kind, double x, std::uint64_t Y, std::vector<int> ks,
                double y_lo, double z_hi, const std::string& s_text) {
    Sink sink(cfg.out);
    auto& os = sink.os();
    const auto family = enumerate_family(x);
    if (kind == "character") {
        std::map<std::uint64_t, double> b;
        std::map<std::uint64_t, mpq_class> bq;
        for (auto p : primes_up_to(Y)) {
            b[p] = 1;
            bq[p] = 1;
        }
        std::vector<MomentRow> rows;
        for (int k : ks) rows.push_back({k, Y, moment_lhs(family, b, Y, k), moment_rand(bq, Y, k).get_d()});
        write_moment_table(os, cfg, x, rows);
    } else if (kind == "sieve") {
        os << provenance_header(cfg, "large-sieve") << '\n' << "x,y,z,k,lhs,prime_term,square_term,c0_term,ratio,k_cap,in_range\n";
        for (int k : ks) {
            auto r = large_sieve_check(family, [](std::uint64_t) { return 1.0; }, y_lo, z_hi, k, false);
            os << fmt(x) << ',' << fmt(y_lo) << ',' << fmt(z_hi) << ',' << k << ',' << fmt(r.lhs) << ','
               << fmt(r.prime_term) << ',' << fmt(r.square_term) << ',' << fmt(r.c0_term) << ',' << fmt(r.ratio) << ','
               << fmt(r.k_cap) << ',' << (r.in_range ? 1 : 0) << '\n';
        }
    } else if (kind == "central") {
        const double nu = NuPolicy::parse(cfg.nu).resolve(x);
        cplx s = s_text == "s0" ? cplx(0.5 + nu / std::log(x), 0) : parse_s(s_text);
        SigmaOptions so;
        so.height_cap = cfg.sigma_height_cap;
        auto sample = sample_family(family, cfg.sample_size, cfg.seed);
        // normalize by the sampled share of D(x)
        auto rf = restricted_family(sample, sample.size(), x, nu, s, so, cfg.threads);
        os << provenance_header(cfg, "central-moments") << '\n'
           << "x,nu,nu_hyp,s_re,s_im,sample,restricted,k,moment,envelope4,ratio4,envelope8,ratio8,k_cap,in_range\n";
        for (int k : ks) {
            auto r = central_moments(rf, k);
            os << fmt(x) << ',' << fmt(nu) << ',' << fmt(rf.nu_hyp) << ',' << fmt(s.real()) << ',' << fmt(s.imag())
               << ',' << sample.size() << ',' << rf.members.size() << ',' << k << ',' << fmt(r.moment) << ','
               << fmt(r.envelope4) << ',' << fmt(r.ratio4) << ',' << fmt(r.envelope8) << ',' << fmt(r.ratio8) << ','
               << fmt(r.k_cap) << ',' << (r.in_range ? 1 : 0) << '\n';
        }
        for (const auto& e : rf.excluded) os << "# excluded " << e.d << ' ' << e.reason << '\n';
        std::size_t bad = 0;
        for (const auto& e : rf.excluded) bad += e.reason.rfind("indeterminate", 0) == 0;
        report_indeterminate(cfg, bad, "moments");
    } else {
        throw DomainError("--kind must be character, sieve or central");
    }
    return kOk;
}

int run_rd_stats(const RunConfig& cfg, const std::string& summary, const std::string& plot, bool near) {
    RdOptions opt;
    opt.nu = NuPolicy::parse(cfg.nu);
    opt.sample_size = cfg.sample_size;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    opt.near_split = near;
    auto rows = rd_statistics(cfg.x_list, opt);
    {
        Sink sink(cfg.out);
        write_rd_samples(sink.os(), cfg, rows);
    }
    if (!summary.empty()) {
        Sink s(summary);
        write_rd_summary(s.os(), cfg, rows);
    }
    if (!plot.empty()) {
        Sink p(plot);
        write_rd_plot(p.os(), cfg, rows);
    }
    std::size_t flagged = 0;
    for (const auto& r : rows) flagged += static_cast<std::size_t>(r.flagged);
    report_indeterminate(cfg, flagged, "rd-stats");
    return kOk;
}

int run_report(const RunConfig& cfg, const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw DomainError("cannot read " + in_path);
    Sink sink(cfg.out);
    report_from_jsonl(in, sink.os());
    return kOk;
}

int run_verify_cmd(const RunConfig& cfg) {
    auto items = run_verify(cfg.threads);
    bool ok = true;
    for (const auto& it : items) {
        std::cout << (it.ok ? "ok   " : "FAIL ") << it.name << ": " << it.detail << '\n';
        ok = ok && it.ok;
    }
    return ok ? kOk : kIndeterminate;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Real zeros of L'(s, chi_d) and related experiments over the family d = 8m"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--config", g.config_file, "key=value configuration file");
    app.add_option("--threads", g.threads, "worker threads");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--eps", g.eps, "target accuracy of L evaluations");
    app.add_option("--cache-dir", g.cache_dir, "result cache directory (default $QUADL_CACHE_DIR)");
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_flag("--strict", g.strict, "exit with status 2 on indeterminate results");
    app.add_flag("--verify-cache", g.verify_cache, "recompute about 1% of cache hits and compare");

    double x = 1e4;
    std::optional<std::uint64_t> d;
    std::uint64_t d_req = 8;
    std::string s_text = "0.5", nu, sigma_min = "auto", in_path, plot, summary, kind = "character", xs;
    std::optional<std::size_t> sample;
    bool deriv = false, oracle = false, count_zeros = false, check_identity = false, near = false;
    double s_real = 0.75, t_max = 50, y_lo = 10, z_hi = 40;
    std::size_t grid = 0;
    std::uint64_t Y = 10;
    std::vector<int> ks{1, 2, 3};
    std::optional<double> z;
    std::optional<std::uint64_t> mc;

    auto* family = app.add_subcommand("family", "list D(x) as CSV d,m");
    family->add_option("--x", x)->required();

    auto* eval = app.add_subcommand("eval", "evaluate L(s, chi_d)");
    eval->add_option("--d", d_req)->required();
    eval->add_option("--s", s_text, "re or re,im")->required();
    eval->add_flag("--deriv", deriv);
    eval->add_flag("--oracle", oracle);

    auto* zeros = app.add_subcommand("zeros", "certified real zeros of L' on [sigma_min, 1]");
    zeros->add_option("--x", x)->required();
    zeros->add_option("--nu", nu, "auto, hyp or a value");
    zeros->add_option("--sample", sample);
    zeros->add_option("--sigma-min", sigma_min, "auto or a value");

    auto* gmin = app.add_subcommand("gamma-min", "lowest zero height of L(s, chi_d)");
    gmin->add_option("--d", d);
    gmin->add_option("--x", x);
    gmin->add_option("--sample", sample);
    gmin->add_option("--t-max", t_max);

    auto* fek = app.add_subcommand("fekete", "Fekete polynomial zeros and Mellin identities");
    fek->add_option("--d", d_req)->required();
    fek->add_flag("--count-zeros", count_zeros);
    fek->add_flag("--check-identity", check_identity);
    fek->add_option("--s", s_real);
    fek->add_option("--grid", grid, "grid points (default 16 d)");

    auto* disc = app.add_subcommand("discrepancy", "family vs random model distribution of -L'/L(z)/V_z");
    disc->add_option("--x-list", xs, "comma separated x values");
    disc->add_option("--z", z);
    disc->add_option("--mc-samples", mc);
    disc->add_option("--sample", sample);
    disc->add_option("--plot", plot, "gnuplot data file x  D_over_bound");

    auto* mom = app.add_subcommand("moments", "character-sum and central moments");
    mom->add_option("--kind", kind, "character, sieve or central");
    mom->add_option("--x", x);
    mom->add_option("--Y", Y);
    mom->add_option("--k", ks)->delimiter(',');
    mom->add_option("--y", y_lo);
    mom->add_option("--z", z_hi);
    mom->add_option("--s", s_text = "s0", "s0 or re[,im]");
    mom->add_option("--nu", nu);
    mom->add_option("--sample", sample);

    auto* rd = app.add_subcommand("rd-stats", "statistics of R_d(1/2 + nu/log x, 1)");
    rd->add_option("--x-list", xs);
    rd->add_option("--nu", nu);
    rd->add_option("--sample", sample);
    rd->add_option("--summary", summary);
    rd->add_option("--plot", plot, "gnuplot data file x  mean_Rd  loglog_x");
    rd->add_flag("--near", near, "also count R_d(1/2, 1/2 + nu/log x) where Hypothesis L_d holds");

    auto* report = app.add_subcommand("report", "plot data from a zeros JSONL file");
    report->add_option("--in", in_path)->required();

    auto* verify = app.add_subcommand("verify", "fast invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    RunConfig cfg;
    try {
        if (!g.config_file.empty()) cfg.load_file(g.config_file);
        if (const char* env = std::getenv("QUADL_CACHE_DIR"); env && cfg.cache_dir.empty()) cfg.cache_dir = env;
        if (g.threads) cfg.threads = std::max(1u, *g.threads);
        if (g.seed) cfg.seed = *g.seed;
        if (g.eps) cfg.eps_target = *g.eps;
        if (g.cache_dir) cfg.cache_dir = *g.cache_dir;
        if (g.out) cfg.out = *g.out;
        if (g.strict) cfg.strict = true;
        if (g.verify_cache) cfg.verify_cache = true;
        if (!nu.empty()) cfg.set("nu", nu);
        if (sample) cfg.sample_size = *sample;
        if (!xs.empty()) cfg.set("x_list", xs);
        if (z) cfg.z = *z;
        if (mc) cfg.mc_samples = *mc;
    } catch (const Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*family) return run_family(cfg, x);
        if (*eval) return run_eval(cfg, d_req, s_text, deriv, oracle);
        if (*zeros) return run_zeros(cfg, x, sigma_min);
        if (*gmin) {
            if (!d && !gmin->count("--x")) throw DomainError("gamma-min needs --d or --x");
            return run_gamma_min(cfg, d, x, t_max);
        }
        if (*fek) return run_fekete(cfg, d_req, count_zeros, check_identity, s_real, grid);
        if (*disc) return run_discrepancy(cfg, plot);
        if (*mom) return run_moments(cfg, kind, x, Y, ks, y_lo, z_hi, s_text);
        if (*rd) return run_rd_stats(cfg, summary, plot, near);
        if (*report) return run_report(cfg, in_path);
        if (*verify) return run_verify_cmd(cfg);
    } catch (const IndeterminateError& e) {
        std::cerr << "indeterminate: " << e.what() << '\n';
        return kIndeterminate;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const TruncationError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIndeterminate;
    }
    return kUsage;
}
