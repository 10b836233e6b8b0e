#include "quadl/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quadl/error.hpp"
#include "quadl/fekete.hpp"
#include "quadl/randmodel.hpp"
#include "quadl/rng.hpp"

namespace quadl {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw DomainError("bad number for " + key + ": " + v);
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) throw DomainError("bad integer for " + key + ": " + v);
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw DomainError("bad boolean for " + key + ": " + v);
}

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "x_list") {
        x_list.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) x_list.push_back(parse_double(key, trim(item)));
        if (x_list.empty()) throw DomainError("x_list must not be empty");
    } else if (key == "nu") {
        NuPolicy::parse(v);
        nu = v;
    } else if (key == "sample_size") {
        sample_size = parse_uint(key, v);
    } else if (key == "seed") {
        seed = parse_uint(key, v);
    } else if (key == "eps_target") {
        eps_target = parse_double(key, v);
    } else if (key == "cache_dir") {
        cache_dir = v;
    } else if (key == "out") {
        out = v;
    } else if (key == "threads") {
        threads = static_cast<unsigned>(parse_uint(key, v));
    } else if (key == "z") {
        z = parse_double(key, v);
    } else if (key == "mc_samples") {
        mc_samples = parse_uint(key, v);
    } else if (key == "sigma_height_cap") {
        sigma_height_cap = parse_double(key, v);
    } else if (key == "strict") {
        strict = parse_bool(key, v);
    } else if (key == "verify_cache") {
        verify_cache = parse_bool(key, v);
    } else {
        throw DomainError("unknown config key: " + key);
    }
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    os << "x_list=";
    for (std::size_t i = 0; i < x_list.size(); ++i) os << (i ? "," : "") << fmt(x_list[i]);
    os << " nu=" << nu << " sample_size=" << sample_size << " seed=" << seed << " eps_target=" << fmt(eps_target)
       << " z=" << fmt(z) << " mc_samples=" << mc_samples << " sigma_height_cap=" << fmt(sigma_height_cap)
       << " strict=" << (strict ? 1 : 0);
    return os.str();
}

std::string provenance_header(const RunConfig& cfg, const std::string& experiment) {
    return std::string("# ") + kVersionTag + " experiment=" + experiment + " " + cfg.serialize();
}

ResultStore::ResultStore(std::filesystem::path dir, bool verify) : dir_(std::move(dir)), verify_(verify) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path ResultStore::path_for(const std::string& key) const {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv64(key)));
    return dir_ / name;
}

nlohmann::json ResultStore::load_or_compute(const std::string& key, const std::function<nlohmann::json()>& producer) {
    const auto path = path_for(key);
    std::optional<nlohmann::json> cached;
    bool check = false;
    {
        std::lock_guard lock(*mutex_);
        if (std::filesystem::exists(path)) {
            try {
                std::ifstream in(path);
                auto entry = nlohmann::json::parse(in);
                if (entry.at("key").get<std::string>() != key) throw CacheError("cache entry key collision");
                if (entry.at("checksum").get<std::uint64_t>() != fnv64(entry.at("value").dump()))
                    throw CacheError("cache checksum mismatch");
                ++hits_;
                cached = entry.at("value");
                check = verify_ && counter_hash(fnv64(key), 0, 0) % 100 == 0;
                if (check) ++verified_;
            } catch (const CacheError& e) {
                std::cerr << "warning: " << e.what() << " for " << path.string() << "; recomputing\n";
                ++recovered_;
            } catch (const nlohmann::json::exception&) {
                std::cerr << "warning: unreadable cache entry " << path.string() << "; recomputing\n";
                ++recovered_;
            }
        }
        if (!cached) ++misses_;
    }
    if (cached) {
        if (check && producer().dump() != cached->dump())
            throw CacheError("cache hit differs from fresh computation: " + key);
        return *cached;
    }
    auto value = producer();
    nlohmann::json entry{{"key", key}, {"checksum", fnv64(value.dump())}, {"value", value}};
    std::lock_guard lock(*mutex_);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << entry.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
    return value;
}

std::string cache_key(const std::string& experiment, std::uint64_t d, const std::string& params) {
    return std::string(kVersionTag) + "|" + experiment + "|d=" + std::to_string(d) + "|" + params;
}

nlohmann::json to_json(const ZeroRecord& r) {
    nlohmann::json zeros = nlohmann::json::array();
    for (const auto& c : r.zeros)
        zeros.push_back({{"loc", c.loc()}, {"halfwidth", c.halfwidth()}, {"lo", c.lo}, {"hi", c.hi}});
    nlohmann::json suspects = nlohmann::json::array();
    for (const auto& s : r.suspects)
        suspects.push_back({{"lo", s.lo}, {"hi", s.hi}, {"min_abs", s.min_abs}, {"contour_count", s.contour_count}});
    return {{"d", r.d},
            {"sigma1", r.sigma1},
            {"sigma2", r.sigma2},
            {"count", r.count},
            {"zeros", zeros},
            {"suspects", suspects},
            {"method", r.method},
            {"lower_bound_only", r.lower_bound_only},
            {"resolved_by_contour", r.resolved_by_contour}};
}

ZeroRecord zero_record_from_json(const nlohmann::json& j) {
    ZeroRecord r;
    r.d = j.at("d").get<std::uint64_t>();
    r.sigma1 = j.at("sigma1").get<double>();
    r.sigma2 = j.at("sigma2").get<double>();
    r.count = j.at("count").get<int>();
    for (const auto& z : j.at("zeros")) {
        ZeroCertificate c;
        c.lo = z.at("lo").get<double>();
        c.hi = z.at("hi").get<double>();
        r.zeros.push_back(c);
    }
    for (const auto& s : j.at("suspects"))
        r.suspects.push_back({s.at("lo").get<double>(), s.at("hi").get<double>(), s.at("min_abs").get<double>(),
                              s.at("contour_count").get<int>()});
    r.method = j.at("method").get<std::string>();
    r.lower_bound_only = j.at("lower_bound_only").get<bool>();
    r.resolved_by_contour = j.value("resolved_by_contour", 0);
    return r;
}

void write_zero_jsonl(std::ostream& os, const RunConfig& cfg, double x, std::vector<ZeroRecord> records) {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.d < b.d; });
    os << provenance_header(cfg, "zeros") << '\n';
    for (const auto& r : records) {
        auto j = to_json(r);
        j["x"] = x;
        os << j.dump() << '\n';
    }
}

void write_moment_table(std::ostream& os, const RunConfig& cfg, double x, const std::vector<MomentRow>& rows) {
    os << provenance_header(cfg, "moments") << '\n';
    os << "x,k,Y,lhs,rand,diff\n";
    for (const auto& r : rows)
        os << fmt(x) << ',' << r.k << ',' << r.Y << ',' << fmt(r.lhs) << ',' << fmt(r.rand) << ','
           << fmt(r.lhs - r.rand) << '\n';
}

void write_discrepancy_table(std::ostream& os, const RunConfig& cfg, const std::vector<DiscrepancyReport>& rows,
                             const std::vector<EmpiricalDistribution>& dists) {
    os << provenance_header(cfg, "discrepancy") << '\n';
    os << "x,z,V,family_n,excluded,mc_n,D,theory_bound,ratio\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << fmt(r.x) << ',' << fmt(r.z) << ',' << fmt(r.V) << ',' << r.family_values.size() << ','
           << (i < dists.size() ? dists[i].excluded.size() : 0) << ',' << r.mc_values.size() << ',' << fmt(r.D) << ','
           << fmt(r.theory_bound) << ',' << fmt(r.ratio) << '\n';
    }
    for (const auto& d : dists) {
        os << "# members x=" << fmt(d.x) << '\n';
        for (const auto& m : d.members) os << "# " << m.d << ',' << fmt(m.value) << '\n';
        for (const auto& e : d.excluded) os << "# excluded " << e.d << ' ' << e.reason << '\n';
    }
}

void write_discrepancy_plot(std::ostream& os, const RunConfig& cfg, const std::vector<DiscrepancyReport>& rows) {
    os << provenance_header(cfg, "discrepancy-plot") << '\n';
    for (const auto& r : rows) os << fmt(r.x) << "  " << fmt(r.ratio) << '\n';
}

void write_rd_samples(std::ostream& os, const RunConfig& cfg, const std::vector<RdRow>& rows) {
    os << provenance_header(cfg, "rd-stats") << '\n';
    os << "x,d,count,suspects,lower_bound_only,near_count\n";
    for (const auto& row : rows)
        for (const auto& s : row.samples)
            os << fmt(row.x) << ',' << s.d << ',' << s.count << ',' << s.suspects << ',' << (s.lower_bound_only ? 1 : 0)
               << ',' << s.near_count << '\n';
}

void write_rd_summary(std::ostream& os, const RunConfig& cfg, const std::vector<RdRow>& rows) {
    os << provenance_header(cfg, "rd-summary") << '\n';
    os << "x,nu,sigma1,family_size,n,mean,sd,se,max,flagged,loglog_x,mean_over_loglog,max_over_bound,near_sum,away_sum,"
          "histogram\n";
    for (const auto& r : rows) {
        os << fmt(r.x) << ',' << fmt(r.nu) << ',' << fmt(r.sigma1) << ',' << r.family_size << ',' << r.samples.size()
           << ',' << fmt(r.mean) << ',' << fmt(r.sd) << ',' << fmt(r.se) << ',' << r.max << ',' << r.flagged << ','
           << fmt(r.loglog) << ',' << fmt(r.mean / r.loglog) << ',' << fmt(r.max / r.loglog_logloglog) << ','
           << r.near_sum << ',' << r.away_sum << ',';
        bool first = true;
        for (auto [c, n] : r.histogram) {
            os << (first ? "" : ";") << c << ':' << n;
            first = false;
        }
        os << '\n';
    }
}

void write_rd_plot(std::ostream& os, const RunConfig& cfg, const std::vector<RdRow>& rows) {
    os << provenance_header(cfg, "rd-plot") << '\n';
    for (const auto& r : rows) os << fmt(r.x) << "  " << fmt(r.mean) << "  " << fmt(r.loglog) << '\n';
}

void report_from_jsonl(std::istream& in, std::ostream& out) {
    std::map<double, std::pair<double, std::size_t>> acc;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto j = nlohmann::json::parse(line);
        if (!j.contains("x")) throw DomainError("report: record without an x field");
        auto& a = acc[j.at("x").get<double>()];
        a.first += j.at("count").get<int>();
        a.second++;
    }
    out << "# x  mean_Rd  loglog_x\n";
    for (const auto& [x, a] : acc)
        out << fmt(x) << "  " << fmt(a.first / static_cast<double>(a.second)) << "  " << fmt(std::log(std::log(x)))
            << '\n';
}

std::vector<VerifyItem> run_verify(unsigned threads) {
    std::vector<VerifyItem> items;
    auto add = [&](std::string name, bool ok, std::string detail) {
        items.push_back({std::move(name), ok, std::move(detail)});
    };
    auto guard = [&](const std::string& name, const std::function<void()>& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            add(name, false, e.what());
        }
    };

    guard("functional equation", [&] {
        double worst = 0;
        for (std::uint64_t d : {8u, 104u, 5016u, 40008u}) {
            LEngine e(make_discriminant(d));
            for (cplx s : {cplx(0.3, 1.7), cplx(0.9, -4.2), cplx(1.2, 8.0), cplx(0.25, 0)}) {
                auto a = e.evaluate(s).lambda, b = e.evaluate(1.0 - s).lambda;
                worst = std::max(worst, std::abs(a - b) / (1 + std::abs(a)));
            }
        }
        add("functional equation", worst <= 1e-10, "max relative residual " + fmt(worst));
    });
    guard("oracle agreement", [&] {
        double worst = 0;
        for (std::uint64_t d : {8u, 104u, 408u}) {
            LEngine e(make_discriminant(d));
            for (double s : {0.55, 0.85, 1.2}) {
                auto v = e.l_value(cplx(s, 0)).value;
                worst = std::max(worst, std::abs(v - euler_maclaurin_oracle(d, s)));
            }
        }
        add("oracle agreement", worst <= 1e-8, "max deviation " + fmt(worst));
    });
    guard("class number anchor", [&] {
        LEngine e(make_discriminant(8));
        double v = e.l_value(cplx(1, 0)).value.real();
        double ref = std::log(1 + std::sqrt(2.0)) / std::sqrt(2.0);
        add("class number anchor", std::abs(v - ref) <= 1e-10, "L(1, chi_8) - log(1+sqrt2)/sqrt2 = " + fmt(v - ref));
    });
    guard("weight continuity", [&] {
        double worst = 0;
        for (double y : {10.0, 100.0, 10000.0})
            for (double b : {y, y * y, y * y * y})
                worst = std::max(worst, std::abs(weight(y, b * (1 + 1e-15)) - weight(y, b * (1 - 1e-15))));
        add("weight continuity", worst <= 1e-12, "max jump " + fmt(worst));
    });
    guard("cover", [&] {
        bool ok = true;
        for (double x : {1e3, 1e5}) {
            auto c = build_cover(x, std::log(std::log(x)));
            ok = ok && cover_contains(c, c.left_end) && cover_contains(c, 1.0);
            ok = ok && c.discs.front().center == 5.0 / 6 && c.discs.front().r == 1.0 / 6;
        }
        add("cover", ok, "x in {1e3, 1e5}, nu = log log x");
    });
    guard("exact expectations", [&] {
        bool ok = expect_X(9) == mpq_class(3, 4) && expect_X(225) == mpq_class(5, 8) && expect_X(4) == 0 &&
                  expect_X(3) == 0;
        add("exact expectations", ok, "E X(9) = 3/4, E X(225) = 5/8");
    });
    guard("fekete", [&] {
        auto m = mellin_identity_check(8, 0.75);
        bool ok = fekete_real_zeros(8).count == 0 && m.residual1 <= 1e-6 && m.residual2 <= 1e-5;
        add("fekete", ok, "residuals " + fmt(m.residual1) + ", " + fmt(m.residual2));
    });
    (void)threads;
    return items;
}

}  // namespace quadl
