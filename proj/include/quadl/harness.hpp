#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "quadl/stats.hpp"

namespace quadl {

inline constexpr const char* kVersionTag = "quadl-1.0.0";

/// Run parameters. Serialized into the first line of every output file; the thread budget is
/// an execution detail and is left out so outputs do not depend on it.
struct RunConfig {
    std::vector<double> x_list{1000, 10000, 100000};
    std::string nu = "auto";
    std::size_t sample_size = 200;
    std::uint64_t seed = 1;
    double eps_target = 1e-15;
    std::string cache_dir;
    std::string out;
    unsigned threads = 1;
    double z = 0.9;
    std::uint64_t mc_samples = 100000;
    double sigma_height_cap = 4.0;
    bool strict = false;
    bool verify_cache = false;

    /// Applies one key=value setting; throws DomainError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    /// key=value lines, '#' comments and blank lines ignored.
    void load_file(const std::filesystem::path& path);

    std::string serialize() const;
};

/// "# quadl-1.0.0 experiment=<name> <config>"
std::string provenance_header(const RunConfig& cfg, const std::string& experiment);

/// Shortest round-trip decimal for a double.
std::string fmt(double v);

std::uint64_t fnv64(const std::string& s);

/// Content-addressed cache of JSON values under a directory. Keys carry the version tag.
class ResultStore {
public:
    explicit ResultStore(std::filesystem::path dir, bool verify = false);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    /// Cached value for key, or producer() stored under it. A corrupt entry raises a warning
    /// and is recomputed. In verify mode about 1% of hits are recomputed and compared; a
    /// mismatch throws CacheError. Safe to call from several threads; producers run unlocked.
    nlohmann::json load_or_compute(const std::string& key, const std::function<nlohmann::json()>& producer);

    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }
    std::size_t verified() const noexcept { return verified_; }
    std::size_t recovered() const noexcept { return recovered_; }

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
    bool verify_;
    std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
    std::size_t hits_ = 0, misses_ = 0, verified_ = 0, recovered_ = 0;
};

/// Cache key for a per-d artifact.
std::string cache_key(const std::string& experiment, std::uint64_t d, const std::string& params);

nlohmann::json to_json(const ZeroRecord& r);
ZeroRecord zero_record_from_json(const nlohmann::json& j);

/// One JSON line per record, sorted by d.
void write_zero_jsonl(std::ostream& os, const RunConfig& cfg, double x, std::vector<ZeroRecord> records);

/// Per-k table "k,Y,lhs,rand,diff".
struct MomentRow {
    int k;
    std::uint64_t Y;
    double lhs;
    double rand;
};
void write_moment_table(std::ostream& os, const RunConfig& cfg, double x, const std::vector<MomentRow>& rows);

void write_discrepancy_table(std::ostream& os, const RunConfig& cfg, const std::vector<DiscrepancyReport>& rows,
                             const std::vector<EmpiricalDistribution>& dists);
/// "x  D_over_bound"
void write_discrepancy_plot(std::ostream& os, const RunConfig& cfg, const std::vector<DiscrepancyReport>& rows);

/// Per-d counts "x,d,count,suspects,lower_bound_only,near_count".
void write_rd_samples(std::ostream& os, const RunConfig& cfg, const std::vector<RdRow>& rows);
/// Per-x summary.
void write_rd_summary(std::ostream& os, const RunConfig& cfg, const std::vector<RdRow>& rows);
/// "x  mean_Rd  loglog_x"
void write_rd_plot(std::ostream& os, const RunConfig& cfg, const std::vector<RdRow>& rows);

/// Aggregates zero JSONL records (field "x" per line) into "x  mean_Rd  loglog_x" rows.
void report_from_jsonl(std::istream& in, std::ostream& out);

struct VerifyItem {
    std::string name;
    bool ok;
    std::string detail;
};

/// Fast invariant suite: functional equation, oracle agreement, weights, covers, exact
/// expectations and the Fekete identity.
std::vector<VerifyItem> run_verify(unsigned threads = 1);

}  // namespace quadl
