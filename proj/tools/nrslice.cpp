// nrslice: command-line front end for the slicing and RACH campaigns.
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nrslice/campaign.hpp"
#include "nrslice/error.hpp"
#include "nrslice/report.hpp"
#include "nrslice/scenario.hpp"

namespace {

using namespace nrslice;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitPartial = 3;

constexpr int kReferenceSlicingSeeds = 25;
constexpr int kReferenceRachSeeds = 1000;

struct CommonArgs {
    std::string scenario;
    std::string plans = "both";
    int seeds = 1;
    std::uint64_t master_seed = 1;
    int jobs = 1;
    std::string out;
    std::string format = "csv,svg";
};

struct RachArgs {
    std::optional<int> index;
    std::optional<int> arrivals;
    std::optional<int> preambles;
    std::optional<int> max_attempts;
};

Scenario load(const std::string& path) { return path.empty() ? default_scenario() : load_scenario(path); }

fs::path out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("NRSLICE_OUT"); env && *env) return env;
    return "nrslice-out";
}

std::vector<PlanMode> parse_plans(const std::string& s) {
    if (s == "both") return {PlanMode::kStatic, PlanMode::kDynamic};
    return {plan_mode_from_string(s)};
}

std::set<std::string> parse_formats(const std::string& s) {
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t p = s.find(',', start);
        const std::string f = s.substr(start, p == std::string::npos ? std::string::npos : p - start);
        if (f != "csv" && f != "svg") throw CLI::ValidationError("--format", "expected csv and/or svg, got '" + f + "'");
        out.insert(f);
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return out;
}

class RunLog {
public:
    void line(const std::string& s) {
        text_ += s;
        text_ += '\n';
        std::cerr << s << '\n';
    }
    /// Recorded in the log file only.
    void quiet(const std::string& s) {
        text_ += s;
        text_ += '\n';
    }
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

/// Runs one campaign and writes its CSV, charts and log into `dir`.
int run_and_export(const Scenario& s, CampaignKind kind, const CommonArgs& args, const fs::path& dir,
                   MetricTable* table_out = nullptr) {
    const std::string hash = scenario_hash(s);
    const auto formats = parse_formats(args.format);
    RunLog log;
    log.line(fmt::format("{} campaign config_hash={} master_seed={} seeds={} plans={} jobs={}", to_string(kind), hash,
                         args.master_seed, args.seeds, args.plans, args.jobs));
    std::string seed_list;
    for (int i = 0; i < args.seeds; ++i)
        seed_list += fmt::format("{}{}", i ? " " : "", run_seed(args.master_seed, static_cast<std::uint64_t>(i)));
    log.quiet("seeds: " + seed_list);

    CampaignOptions opt;
    opt.plans = parse_plans(args.plans);
    opt.seeds = args.seeds;
    opt.master_seed = args.master_seed;
    opt.jobs = args.jobs;
    opt.cache_dir = dir / "cache";
    CampaignResult result = run_campaign(s, kind, opt);
    if (result.reused) log.line(fmt::format("reused {} cached runs", result.reused));
    for (const auto& f : result.failures) log.line("FAILED " + f);

    const std::string name(to_string(kind));
    if (formats.contains("csv")) {
        write_file(dir / (name + ".csv"), to_csv(result.table, hash));
        write_file(dir / (name + "_seeds.csv"), to_seed_csv(result, args.master_seed, hash));
    }
    if (formats.contains("svg")) write_charts(result.table, dir, hash, [&](const std::string& m) { log.line(m); });
    log.line(fmt::format("{} of {} runs completed", result.runs.size(), result.runs.size() + result.failures.size()));
    write_file(dir / (name + ".log"), log.text());
    if (table_out) *table_out = result.table;
    return result.failures.empty() ? kExitOk : kExitPartial;
}

Scenario apply_rach_overrides(Scenario s, const RachArgs& r) {
    for (auto& iv : s.intervals) {
        if (r.index) iv.static_prach_index = iv.dynamic_prach_index = *r.index;
        if (r.arrivals) iv.mmtc_arrivals = *r.arrivals;
    }
    if (r.arrivals) s.fleet.smart_tags = std::max(s.fleet.smart_tags, *r.arrivals);
    if (r.preambles) s.rach.base.num_preambles = *r.preambles;
    if (r.max_attempts) s.rach.base.preamble_trans_max = *r.max_attempts;
    validate(s);
    return s;
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_seeds) {
    cmd->add_option("--scenario", a.scenario, "Scenario file (built-in distribution center when omitted)");
    cmd->add_option("--plans", a.plans, "static, dynamic or both")->check(CLI::IsMember({"static", "dynamic", "both"}));
    if (with_seeds) cmd->add_option("--seeds", a.seeds, "Seeds per plan")->check(CLI::PositiveNumber);
    cmd->add_option("--master-seed", a.master_seed, "Master seed");
    cmd->add_option("--jobs", a.jobs, "Concurrent seeds")->check(CLI::PositiveNumber);
    cmd->add_option("--out", a.out, "Output directory (default $NRSLICE_OUT or ./nrslice-out)");
    cmd->add_option("--format", a.format, "Comma-separated output formats: csv, svg");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"5G NR slicing and random-access simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, rach_args, repro_args;
    RachArgs rach_over;
    std::string validate_path;

    auto* run = app.add_subcommand("run", "Slicing campaign: static and/or dynamic plans over all intervals");
    add_common(run, run_args, true);

    auto* rach = app.add_subcommand("rach", "Random-access campaign for the mMTC batches");
    add_common(rach, rach_args, true);
    rach->add_option("--index", rach_over.index, "PRACH configuration index for every interval and plan");
    rach->add_option("--arrivals", rach_over.arrivals, "Simultaneous arrivals in every interval")->check(CLI::NonNegativeNumber);
    rach->add_option("--preambles", rach_over.preambles, "Contention preamble pool size");
    rach->add_option("--max-attempts", rach_over.max_attempts, "preambleTransMax");

    auto* repro = app.add_subcommand("reproduce", "Both campaigns at reference seed counts, compared to reference values");
    add_common(repro, repro_args, false);

    auto* val = app.add_subcommand("validate", "Check a scenario file and print its config hash");
    val->add_option("scenario", validate_path, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*val) {
            const Scenario s = load_scenario(validate_path);
            std::cout << "ok config_hash=" << scenario_hash(s) << '\n';
            return kExitOk;
        }
        if (*run) {
            parse_formats(run_args.format);
            return run_and_export(load(run_args.scenario), CampaignKind::kSlicing, run_args, out_dir(run_args.out));
        }
        if (*rach) {
            parse_formats(rach_args.format);
            const Scenario s = apply_rach_overrides(load(rach_args.scenario), rach_over);
            return run_and_export(s, CampaignKind::kRach, rach_args, out_dir(rach_args.out));
        }
        if (*repro) {
            parse_formats(repro_args.format);
            const Scenario s = load(repro_args.scenario);
            const fs::path dir = out_dir(repro_args.out);
            MetricTable slicing, rach_table;
            CommonArgs a = repro_args;
            a.seeds = kReferenceSlicingSeeds;
            const int rc1 = run_and_export(s, CampaignKind::kSlicing, a, dir, &slicing);
            a.seeds = kReferenceRachSeeds;
            const int rc2 = run_and_export(s, CampaignKind::kRach, a, dir, &rach_table);
            const auto rows = evaluate_targets(slicing, rach_table);
            const std::string text = format_targets(rows, scenario_hash(s));
            write_file(dir / "targets.txt", text);
            std::cout << text;
            if (rc1 != kExitOk || rc2 != kExitOk) return kExitPartial;
            bool failed = false;
            for (const auto& r : rows)
                if (!r.pass) {
                    std::cerr << "failed: " << r.criterion << ' ' << r.description << '\n';
                    failed = true;
                }
            return failed ? kExitError : kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const CacheMismatch& e) {
        std::cerr << "resume aborted: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
