// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "nrslice/campaign.hpp"
#include "nrslice/report.hpp"
#include "nrslice/rng.hpp"
#include "nrslice/timebase.hpp"
#include "rach_oracle.hpp"

using namespace nrslice;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
constexpr int kRachSeeds = 1000;
constexpr int kSlicingSeeds = 25;
constexpr int kOracleTrials = 10'000;
constexpr double kOracleSigmas = 3.0;

struct Line {
    std::string id;
    std::string what;
    std::string detail;
    bool pass;
};

std::vector<Line> g_lines;

void report(std::string id, std::string what, std::string detail, bool pass) {
    fmt::print("[{}] {:<4} {} | {}\n", pass ? "PASS" : "FAIL", id, what, detail);
    std::fflush(stdout);
    g_lines.push_back({std::move(id), std::move(what), std::move(detail), pass});
}

std::string value_text(const std::optional<double>& v) { return v ? fmt::format("{:.6g}", *v) : "n/a"; }

void report_targets(const std::vector<TargetRow>& rows) {
    for (const auto& r : rows)
        report(r.criterion, r.description, fmt::format("obtained {} target {}", value_text(r.obtained), r.target), r.pass);
}

CampaignOptions options(int seeds, int jobs) {
    CampaignOptions o;
    o.seeds = seeds;
    o.jobs = jobs;
    o.master_seed = kMasterSeed;
    return o;
}

// Two-sided normal quantile for tail mass `alpha`, by bisection on erfc.
double z_for_two_sided(double alpha) {
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::erfc(mid / std::sqrt(2.0)) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct OracleCase {
    int n, preambles, max_attempts, prach_index;
    std::int64_t backoff_ms;
};

// Per-run statistics of an outcome: blocked UEs, total attempts, total access delay in ms.
std::array<double, 3> stats_of(const oracle::Outcome& o, std::int64_t first_slot_ns) {
    std::array<double, 3> s{};
    for (const auto& ue : o) {
        if (ue.success_ns < 0) s[0] += 1;
        s[1] += ue.attempts;
        if (ue.success_ns >= 0) s[2] += static_cast<double>(ue.success_ns - first_slot_ns) * 1e-6;
    }
    return s;
}

void check_oracle() {
    const OracleCase cases[] = {
        {1, 1, 1, 19, 20}, {2, 2, 3, 19, 20}, {3, 2, 3, 16, 20}, {3, 3, 3, 22, 20},
        {4, 3, 2, 19, 20}, {4, 3, 3, 16, 10}, {4, 2, 3, 22, 5},
    };
    // family-wise level of a single 3-sigma test, split over each instance's categories
    const double family_alpha = std::erfc(kOracleSigmas / std::sqrt(2.0));
    bool all = true;
    std::string detail;
    for (const auto& c : cases) {
        oracle::Instance in{c.n, c.preambles, c.max_attempts, pattern_for_index(c.prach_index)};
        in.backoff_ns = c.backoff_ms * 1'000'000;
        const auto dist = oracle::enumerate(in);

        RachConfig cfg = RachConfig::for_index(c.prach_index);
        cfg.num_preambles = c.preambles;
        cfg.preamble_trans_max = c.max_attempts;
        cfg.backoff_indicator = SimTime::from_ms(c.backoff_ms);
        std::map<oracle::Outcome, int> counts;
        for (int t = 0; t < kOracleTrials; ++t)
            ++counts[oracle::outcome_of(simulate_rach(static_cast<std::size_t>(c.n), cfg, run_seed(kMasterSeed, t)))];

        const std::int64_t first = next_ra_slot(in.pattern, SimTime{0}).ns;
        std::array<double, 3> mean{}, sq{}, emp{};
        for (const auto& [o, p] : dist) {
            const auto s = stats_of(o, first);
            for (int k = 0; k < 3; ++k) {
                mean[k] += p * s[k];
                sq[k] += p * s[k] * s[k];
            }
        }
        for (const auto& [o, n] : counts) {
            const auto s = stats_of(o, first);
            for (int k = 0; k < 3; ++k) emp[k] += n * s[k] / kOracleTrials;
        }
        double worst_stat = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double se = std::sqrt(std::max(0.0, sq[k] - mean[k] * mean[k]) / kOracleTrials);
            const double diff = std::abs(emp[k] - mean[k]);
            worst_stat = std::max(worst_stat, se > 0 ? diff / se : (diff < 1e-9 ? 0.0 : 1e9));
        }
        const auto cmp = oracle::compare(dist, counts, kOracleTrials);
        const double z_cat = z_for_two_sided(family_alpha / static_cast<double>(cmp.categories));
        const bool ok = cmp.unexpected == 0.0 && worst_stat <= kOracleSigmas && cmp.worst_z <= z_cat;
        all = all && ok;
        detail += fmt::format("{}(n{} P{} A{} idx{} BI{}: stats {:.2f}se, cats {:.2f}/{:.2f}se over {}) ", ok ? "ok" : "MISMATCH",
                              c.n, c.preambles, c.max_attempts, c.prach_index, c.backoff_ms, worst_stat, cmp.worst_z,
                              z_cat, cmp.categories);
    }
    report("7", "RACH outcomes vs exhaustive enumeration, 10000 seeds", detail, all);
}

bool same_records(const std::vector<PacketRecord>& a, const std::vector<PacketRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.profile != y.profile || x.device != y.device || x.size_bytes != y.size_bytes || x.created != y.created ||
            x.delivered != y.delivered || x.drop_reason != y.drop_reason || x.interval != y.interval)
            return false;
    }
    return true;
}

void check_isolation(const Scenario& s) {
    Scenario heavy = s;
    for (auto& iv : heavy.intervals) iv.worker_rate_bps *= 2.0;
    bool all = true;
    std::size_t records = 0;
    for (PlanMode mode : {PlanMode::kStatic, PlanMode::kDynamic}) {
        for (int i = 0; i < 2; ++i) {
            const auto seed = run_seed(kMasterSeed, static_cast<std::uint64_t>(i));
            const auto base = run_slicing_seed(s, mode, seed, true);
            const auto doubled = run_slicing_seed(heavy, mode, seed, true);
            all = all && !base.urllc_records.empty() && same_records(base.urllc_records, doubled.urllc_records);
            records += base.urllc_records.size();
        }
    }
    report("12", "URLLC records unchanged when eMBB load doubles",
           fmt::format("{} URLLC records compared over 2 plans x 2 seeds", records), all);
}

void check_numerology() {
    struct Row {
        int mu, scs_khz;
        std::int64_t slot_ns, symbol_ns;
        int per_subframe;
    };
    const Row rows[] = {
        {0, 15, 1'000'000, 71'429, 1}, {1, 30, 500'000, 35'714, 2}, {2, 60, 250'000, 17'857, 4},
        {3, 120, 125'000, 8'929, 8},   {4, 240, 62'500, 4'464, 16},
    };
    int ok = 0;
    for (const auto& r : rows) {
        const auto p = numerology_params(Numerology(r.mu));
        if (p.scs_khz == r.scs_khz && p.slot_duration.ns == r.slot_ns && p.symbol_duration.ns == r.symbol_ns &&
            p.slots_per_subframe == r.per_subframe)
            ++ok;
    }
    report("14", "numerology SCS/slot/symbol/slots-per-subframe, mu 0-4", fmt::format("{}/5 exact", ok), ok == 5);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario s = default_scenario();
    const std::string hash = scenario_hash(s);
    fmt::print("acceptance suite, config_hash={} master_seed={}\n", hash, kMasterSeed);

    const auto rach = run_campaign(s, CampaignKind::kRach, options(kRachSeeds, 1));
    report_targets(evaluate_targets({}, rach.table));

    check_oracle();

    const auto slicing = run_campaign(s, CampaignKind::kSlicing, options(kSlicingSeeds, 1));
    report_targets(evaluate_targets(slicing.table, {}));

    check_isolation(s);

    {
        const auto rach4 = run_campaign(s, CampaignKind::kRach, options(kRachSeeds, 4));
        const auto slicing4 = run_campaign(s, CampaignKind::kSlicing, options(kSlicingSeeds, 4));
        const bool rach_same = to_csv(rach.table, hash) == to_csv(rach4.table, hash) &&
                               to_seed_csv(rach, kMasterSeed, hash) == to_seed_csv(rach4, kMasterSeed, hash);
        const bool slicing_same = to_csv(slicing.table, hash) == to_csv(slicing4.table, hash) &&
                                  to_seed_csv(slicing, kMasterSeed, hash) == to_seed_csv(slicing4, kMasterSeed, hash);
        const bool clean = rach.failures.empty() && slicing.failures.empty();
        report("13", "same master seed gives byte-identical CSV for jobs 1 and 4",
               fmt::format("rach {}, slicing {}, failed runs {}", rach_same ? "identical" : "DIFFERENT",
                           slicing_same ? "identical" : "DIFFERENT", rach.failures.size() + slicing.failures.size()),
               rach_same && slicing_same && clean);
    }

    check_numerology();

    int failed = 0;
    for (const auto& l : g_lines) failed += l.pass ? 0 : 1;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} of {} criteria passed ({:.0f} s)\n", g_lines.size() - static_cast<std::size_t>(failed), g_lines.size(), secs);
    return failed == 0 ? 0 : 1;
}
