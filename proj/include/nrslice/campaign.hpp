#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrslice/metrics.hpp"
#include "nrslice/scenario.hpp"
#include "nrslice/slice_sim.hpp"

namespace nrslice {

/// Seed of run `index` in a campaign. Runs are independent of one another and
/// of the worker count.
constexpr std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t index) {
    return derive_seed(master_seed, {index});
}

/// Configuration of `profile`'s slice under `mode` for the whole run.
SliceRunConfig slice_run_config(const Scenario& s, PlanMode mode, Profile profile);

/// Offered traffic of one profile across all intervals.
TrafficPlan slice_traffic(const Scenario& s, Profile profile, std::uint64_t seed);

struct SlicingRun {
    RunMetrics metrics;
    std::array<SliceRunStats, 3> stats;   // indexed by Profile
    std::vector<PacketRecord> urllc_records;
};

/// One full slicing run of `mode`: all three slices over every interval.
SlicingRun run_slicing_seed(const Scenario& s, PlanMode mode, std::uint64_t seed, bool keep_urllc_records = false);

/// RACH outcome of every interval's mMTC batch under `mode`'s PRACH indices.
std::vector<RaResults> run_rach_intervals(const Scenario& s, PlanMode mode, std::uint64_t seed);
RunMetrics run_rach_seed(const Scenario& s, PlanMode mode, std::uint64_t seed);

enum class CampaignKind { kSlicing, kRach };
std::string_view to_string(CampaignKind k);

/// Thrown when a resume cache was written for a different scenario or master seed.
class CacheMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CampaignOptions {
    std::vector<PlanMode> plans = {PlanMode::kStatic, PlanMode::kDynamic};
    int seeds = 1;
    std::uint64_t master_seed = 1;
    int jobs = 1;
    /// Per-seed results are appended here and reused on the next invocation.
    std::optional<std::filesystem::path> cache_dir;
    /// Replaces the per-seed runner; used to exercise failure handling.
    std::function<RunMetrics(PlanMode, std::uint64_t seed)> runner;
    std::function<void(const std::string&)> log;
};

struct CampaignResult {
    std::vector<RunMetrics> runs;       // completed runs, plan-major then seed order
    std::vector<std::pair<PlanMode, int>> run_ids;  // (plan, seed index) of each entry in `runs`
    std::vector<std::string> failures;  // one message per failed run
    std::size_t reused = 0;             // runs taken from the cache
    MetricTable table;
};

/// Runs `options.seeds` seeds of every selected plan on `options.jobs` threads.
/// A failing run is reported and the others still complete.
CampaignResult run_campaign(const Scenario& s, CampaignKind kind, const CampaignOptions& options);

/// One row of the reference comparison.
struct TargetRow {
    std::string criterion;     // short id such as "1" or "5b"
    std::string description;
    std::string target;        // reference value and tolerance as text
    std::optional<double> obtained;
    bool pass = false;
};

/// Evaluates the quantitative reference targets against campaign tables.
/// Either table may be empty, in which case its rows are skipped.
std::vector<TargetRow> evaluate_targets(const MetricTable& slicing, const MetricTable& rach);

}  // namespace nrslice
