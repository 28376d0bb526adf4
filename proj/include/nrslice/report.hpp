#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrslice/campaign.hpp"
#include "nrslice/metrics.hpp"

namespace nrslice {

inline constexpr std::string_view kCsvHeader = "plan,interval,profile,metric,mean,dev_lo,dev_hi,seeds";

/// Header line, one row per key in key order, then a `# config_hash=` trailer.
/// Numbers use the shortest representation that reads back exactly.
std::string to_csv(const MetricTable& table, std::string_view config_hash);

inline constexpr std::string_view kSeedCsvHeader = "plan,seed_index,seed,interval,profile,metric,value";

/// Per-run values of a campaign, one row per (run, metric), in run order.
std::string to_seed_csv(const CampaignResult& result, std::uint64_t master_seed, std::string_view config_hash);

struct ParsedCsv {
    MetricTable table;
    std::string config_hash;
};

/// Inverse of to_csv. Throws std::runtime_error naming the offending line.
ParsedCsv parse_csv(std::string_view text);

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error naming the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

/// A grouped bar chart: one group per interval row plus combined, one bar per plan.
struct ChartSpec {
    std::string file;    // file name, no directory
    std::string title;
    std::string profile;
    std::string metric;
    std::string unit;
    double scale = 1.0;  // value multiplier for display
    bool log_axis = false;
};

/// Chart families emitted by `write_charts`.
std::span<const ChartSpec> chart_specs();

/// Renders one SVG chart; empty when the table has no rows for the family.
std::string render_chart(const MetricTable& table, const ChartSpec& spec, std::string_view config_hash);

/// Writes every non-empty chart family into `dir`; skipped families are
/// reported through `log`. Returns the written paths.
std::vector<std::filesystem::path> write_charts(const MetricTable& table, const std::filesystem::path& dir,
                                                std::string_view config_hash,
                                                const std::function<void(const std::string&)>& log);

/// Plain-text comparison of reference targets and obtained values.
std::string format_targets(std::span<const TargetRow> rows, std::string_view config_hash);

}  // namespace nrslice
