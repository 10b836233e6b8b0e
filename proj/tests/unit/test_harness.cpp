#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "quadl/error.hpp"
#include "quadl/harness.hpp"
#include "quadl/parallel.hpp"
#include "quadl/rng.hpp"

#include <unistd.h>

using namespace quadl;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("quadl_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing and serialization") {
    RunConfig cfg;
    cfg.set("x_list", "1000, 2000");
    cfg.set("nu", "hyp");
    cfg.set("seed", "42");
    cfg.set("strict", "true");
    CHECK(cfg.x_list == std::vector<double>{1000, 2000});
    CHECK(cfg.seed == 42);
    CHECK(cfg.strict);
    CHECK_THROWS_AS(cfg.set("nope", "1"), DomainError);
    CHECK_THROWS_AS(cfg.set("seed", "abc"), DomainError);
    CHECK_THROWS_AS(cfg.set("nu", "-1"), DomainError);

    auto dir = scratch_dir("cfg");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# comment\n\nsample_size = 17\nz=0.8\n";
    }
    cfg.load_file(dir / "run.cfg");
    CHECK(cfg.sample_size == 17);
    CHECK(cfg.z == 0.8);
    {
        std::ofstream f(dir / "bad.cfg");
        f << "no equals sign\n";
    }
    CHECK_THROWS_AS(cfg.load_file(dir / "bad.cfg"), DomainError);

    auto header = provenance_header(cfg, "demo");
    CHECK(header.rfind(std::string("# ") + kVersionTag + " experiment=demo", 0) == 0);
    CHECK(header.find("seed=42") != std::string::npos);
    RunConfig other = cfg;
    other.threads = 8;
    CHECK(provenance_header(other, "demo") == header);
    fs::remove_all(dir);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.0, -2.5}) CHECK(std::stod(fmt(v)) == v);
    CHECK(fmt(NAN) == "nan");
}

TEST_CASE("result store: cold, warm, version tag, corruption") {
    auto dir = scratch_dir("store");
    ResultStore store(dir);
    int calls = 0;
    auto producer = [&] {
        ++calls;
        return nlohmann::json{{"value", 3.25}};
    };
    auto key = cache_key("demo", 8, "p=1");
    auto a = store.load_or_compute(key, producer);
    CHECK(calls == 1);
    auto b = store.load_or_compute(key, producer);
    CHECK(calls == 1);
    CHECK(a == b);
    CHECK(store.hits() == 1);

    // a different version tag is a different key
    auto other = std::string("quadl-0.0.0") + key.substr(key.find('|'));
    store.load_or_compute(other, producer);
    CHECK(calls == 2);

    for (const auto& e : fs::directory_iterator(dir)) {
        std::ofstream f(e.path());
        f << "{\"key\": \"x\", \"checksum\": 1, \"value\": 0}\n";
    }
    auto c = store.load_or_compute(key, producer);
    CHECK(calls == 3);
    CHECK(c == a);
    CHECK(store.recovered() >= 1);
    fs::remove_all(dir);
}

TEST_CASE("result store verify mode detects stale entries") {
    auto dir = scratch_dir("verify");
    ResultStore writer(dir);
    // find a key that falls in the verified 1%
    std::string key;
    for (int i = 0; i < 100000; ++i) {
        auto k = cache_key("demo", static_cast<std::uint64_t>(i), "");
        if (counter_hash(fnv64(k), 0, 0) % 100 == 0) {
            key = k;
            break;
        }
    }
    REQUIRE(!key.empty());
    writer.load_or_compute(key, [] { return nlohmann::json(1); });
    ResultStore checker(dir, true);
    CHECK_THROWS_AS(checker.load_or_compute(key, [] { return nlohmann::json(2); }), CacheError);
    CHECK(checker.load_or_compute(key, [] { return nlohmann::json(1); }) == nlohmann::json(1));
    fs::remove_all(dir);
}

TEST_CASE("zero records survive JSON round trip and sort by d") {
    ZeroRecord a;
    a.d = 104;
    a.sigma1 = 0.6;
    a.sigma2 = 1;
    a.count = 1;
    a.zeros.push_back({0.81, 0.82, 0, 0, 0, 0, false});
    ZeroRecord b = a;
    b.d = 88;
    b.count = 0;
    b.zeros.clear();
    auto back = zero_record_from_json(to_json(a));
    CHECK(back.d == 104);
    CHECK(back.zeros.size() == 1);
    CHECK(back.zeros[0].loc() == doctest::Approx(0.815));

    std::ostringstream os;
    write_zero_jsonl(os, RunConfig{}, 20, {a, b});
    std::istringstream in(os.str());
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header[0] == '#');
    CHECK(nlohmann::json::parse(first)["d"] == 88);
    CHECK(nlohmann::json::parse(second)["d"] == 104);

    std::istringstream rin(os.str());
    std::ostringstream rep;
    report_from_jsonl(rin, rep);
    CHECK(rep.str() == "# x  mean_Rd  loglog_x\n20  0.5  " + fmt(std::log(std::log(20.0))) + "\n");
}

TEST_CASE("parallel_for keeps slot order and rethrows") {
    std::vector<int> out(1000);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));
    CHECK_THROWS_AS(parallel_for(100, 3,
                                 [](std::size_t i) {
                                     if (i == 42) throw DomainError("boom");
                                 }),
                    DomainError);
}

TEST_CASE("verify suite passes") {
    for (const auto& item : run_verify()) {
        INFO(item.name << ": " << item.detail);
        CHECK(item.ok);
    }
}
