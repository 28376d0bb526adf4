#include <gtest/gtest.h>

#include <filesystem>

#include "nrslice/campaign.hpp"
#include "nrslice/report.hpp"

using namespace nrslice;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

CampaignOptions rach_options(int seeds, int jobs) {
    CampaignOptions o;
    o.seeds = seeds;
    o.jobs = jobs;
    o.master_seed = 42;
    return o;
}

}  // namespace

TEST(CampaignTest, RunSeedsAreDistinctAndStable) {
    EXPECT_EQ(run_seed(1, 0), run_seed(1, 0));
    EXPECT_NE(run_seed(1, 0), run_seed(1, 1));
    EXPECT_NE(run_seed(1, 0), run_seed(2, 0));
}

TEST(CampaignTest, WorkerCountDoesNotChangeOutput) {
    const Scenario s = default_scenario();
    const auto one = run_campaign(s, CampaignKind::kRach, rach_options(12, 1));
    const auto four = run_campaign(s, CampaignKind::kRach, rach_options(12, 4));
    EXPECT_EQ(one.runs, four.runs);
    EXPECT_EQ(to_csv(one.table, scenario_hash(s)), to_csv(four.table, scenario_hash(s)));
    EXPECT_EQ(to_seed_csv(one, 42, "h"), to_seed_csv(four, 42, "h"));
    EXPECT_EQ(one.runs.size(), 24u);
    EXPECT_TRUE(one.failures.empty());
}

TEST(CampaignTest, PlanMajorOrder) {
    const auto r = run_campaign(default_scenario(), CampaignKind::kRach, rach_options(3, 2));
    ASSERT_EQ(r.run_ids.size(), 6u);
    EXPECT_EQ(r.run_ids[0], std::make_pair(PlanMode::kStatic, 0));
    EXPECT_EQ(r.run_ids[2], std::make_pair(PlanMode::kStatic, 2));
    EXPECT_EQ(r.run_ids[3], std::make_pair(PlanMode::kDynamic, 0));
}

TEST(CampaignTest, RachRunMatchesDirectCall) {
    const Scenario s = default_scenario();
    const auto r = run_campaign(s, CampaignKind::kRach, rach_options(2, 1));
    EXPECT_EQ(r.runs[1], run_rach_seed(s, PlanMode::kStatic, run_seed(42, 1)));
    EXPECT_EQ(r.table.at({"static", "1", "mMTC", "blocking_probability"}).seeds, 2u);
}

TEST(CampaignTest, CacheResumesAndExtends) {
    const Scenario s = default_scenario();
    const auto dir = fresh_dir("nrslice_cache_test");
    CampaignOptions o = rach_options(4, 2);
    o.cache_dir = dir;
    const auto first = run_campaign(s, CampaignKind::kRach, o);
    EXPECT_EQ(first.reused, 0u);
    o.seeds = 6;
    int calls = 0;
    o.runner = [&](PlanMode mode, std::uint64_t seed) {
        ++calls;
        return run_rach_seed(s, mode, seed);
    };
    const auto second = run_campaign(s, CampaignKind::kRach, o);
    EXPECT_EQ(second.reused, 8u);
    EXPECT_EQ(calls, 4);
    o.cache_dir.reset();
    o.runner = nullptr;
    EXPECT_EQ(second.runs, run_campaign(s, CampaignKind::kRach, o).runs);
    std::filesystem::remove_all(dir);
}

TEST(CampaignTest, CacheFromOtherConfigRejected) {
    Scenario s = default_scenario();
    const auto dir = fresh_dir("nrslice_cache_mismatch");
    CampaignOptions o = rach_options(2, 1);
    o.cache_dir = dir;
    (void)run_campaign(s, CampaignKind::kRach, o);
    o.master_seed = 43;
    EXPECT_THROW((void)run_campaign(s, CampaignKind::kRach, o), CacheMismatch);
    o.master_seed = 42;
    s.intervals[0].mmtc_arrivals = 900;
    EXPECT_THROW((void)run_campaign(s, CampaignKind::kRach, o), CacheMismatch);
    std::filesystem::remove_all(dir);
}

TEST(CampaignTest, FailingRunIsReportedOthersComplete) {
    const Scenario s = default_scenario();
    CampaignOptions o = rach_options(5, 3);
    const std::uint64_t bad = run_seed(42, 2);
    o.runner = [&](PlanMode mode, std::uint64_t seed) {
        if (seed == bad && mode == PlanMode::kDynamic) throw std::runtime_error("injected");
        return run_rach_seed(s, mode, seed);
    };
    const auto r = run_campaign(s, CampaignKind::kRach, o);
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_NE(r.failures[0].find("injected"), std::string::npos);
    EXPECT_EQ(r.runs.size(), 9u);
    EXPECT_EQ(r.table.at({"dynamic", "1", "mMTC", "blocking_probability"}).seeds, 4u);
    EXPECT_EQ(r.table.at({"static", "1", "mMTC", "blocking_probability"}).seeds, 5u);
}

TEST(TargetsTest, RowsSkippedForMissingTables) {
    EXPECT_TRUE(evaluate_targets({}, {}).empty());
    MetricTable rach;
    rach[{"static", "1", "mMTC", "blocking_probability"}] = {0.91, 0, 0, 1000};
    const auto rows = evaluate_targets({}, rach);
    ASSERT_FALSE(rows.empty());
    const auto it = std::find_if(rows.begin(), rows.end(), [](const TargetRow& r) { return r.criterion == "1"; });
    ASSERT_NE(it, rows.end());
    EXPECT_TRUE(it->pass);
    EXPECT_DOUBLE_EQ(*it->obtained, 0.91);
}
