#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrslice/error.hpp"
#include "nrslice/rng.hpp"
#include "nrslice/slicing.hpp"

using namespace nrslice;

namespace {
const SliceConfig& slice(const SliceSet& s, Profile p) { return s[static_cast<std::size_t>(p)]; }
}  // namespace

TEST(SlicePlanTest, StaticBandwidths) {
    const SlicePlan plan = build_slice_plan(PlanMode::kStatic);
    ASSERT_EQ(plan.intervals.size(), 3u);
    for (const SliceSet& s : plan.intervals) {
        EXPECT_DOUBLE_EQ(slice(s, Profile::kEmbb).bandwidth_hz, 11e6);
        EXPECT_DOUBLE_EQ(slice(s, Profile::kUrllc).bandwidth_hz, 6e6);
        EXPECT_DOUBLE_EQ(slice(s, Profile::kMmtc).bandwidth_hz, 3e6);
        EXPECT_EQ(slice(s, Profile::kEmbb).prbs, 55);
        EXPECT_EQ(slice(s, Profile::kUrllc).prbs, 7);
        EXPECT_EQ(slice(s, Profile::kMmtc).prbs, 15);
    }
}

TEST(SlicePlanTest, DynamicBandwidths) {
    const SlicePlan plan = build_slice_plan(PlanMode::kDynamic);
    EXPECT_DOUBLE_EQ(slice(plan.intervals[0], Profile::kEmbb).bandwidth_hz, 8e6);
    EXPECT_DOUBLE_EQ(slice(plan.intervals[1], Profile::kUrllc).bandwidth_hz, 12e6);
    EXPECT_DOUBLE_EQ(slice(plan.intervals[2], Profile::kEmbb).bandwidth_hz, 14e6);
    EXPECT_EQ(slice(plan.intervals[1], Profile::kUrllc).prbs, 15);
    EXPECT_EQ(slice(plan.intervals[2], Profile::kEmbb).prbs, 70);
}

TEST(SlicePlanTest, NumerologyAndDirection) {
    const SlicePlan plan = build_slice_plan(PlanMode::kDynamic);
    for (const SliceSet& s : plan.intervals) {
        EXPECT_EQ(slice(s, Profile::kEmbb).numerology.mu(), 0);
        EXPECT_EQ(slice(s, Profile::kUrllc).numerology.mu(), 2);
        EXPECT_EQ(slice(s, Profile::kMmtc).numerology.mu(), 0);
        EXPECT_EQ(slice(s, Profile::kEmbb).direction, Direction::kDownlink);
        EXPECT_EQ(slice(s, Profile::kUrllc).direction, Direction::kDownlink);
        EXPECT_EQ(slice(s, Profile::kMmtc).direction, Direction::kUplink);
    }
}

TEST(SlicePlanTest, RejectsBadSum) {
    const std::vector<Split> bad = {{0.5, 0.4, 0.2}};
    EXPECT_THROW(build_slice_plan(PlanMode::kStatic, bad), ConfigError);
}

TEST(SlicePlanTest, RejectsTooNarrow) {
    const std::vector<Split> narrow = {{0.995, 0.004, 0.001}};
    EXPECT_THROW(build_slice_plan(PlanMode::kStatic, narrow), SliceTooNarrow);
}

TEST(SlicesAt, Examples) {
    const SlicePlan dyn = build_slice_plan(PlanMode::kDynamic);
    const SlicePlan st = build_slice_plan(PlanMode::kStatic);
    EXPECT_DOUBLE_EQ((*slices_at(dyn, SimTime{0}))[0].bandwidth_fraction, 0.40);
    EXPECT_DOUBLE_EQ((*slices_at(st, SimTime::from_s(std::int64_t{1500})))[0].bandwidth_fraction, 0.55);
    EXPECT_DOUBLE_EQ((*slices_at(dyn, SimTime::from_s(std::int64_t{600})))[0].bandwidth_fraction, 0.30);
    EXPECT_EQ(*interval_at(dyn, SimTime::from_s(std::int64_t{600}) - SimTime{1}), 0u);
    EXPECT_FALSE(slices_at(dyn, SimTime::from_s(std::int64_t{1800})).has_value());
}

TEST(RoundRobin, SingleDevice) {
    RoundRobinScheduler rr(1);
    const std::vector<int> demand = {100};
    EXPECT_EQ(rr.allocate(demand, 25), (std::vector<Grant>{{0, 25}}));
}

TEST(RoundRobin, ThreeDevicesTenPrbs) {
    RoundRobinScheduler rr(3);
    const std::vector<int> demand = {100, 100, 100};
    EXPECT_EQ(rr.allocate(demand, 10), (std::vector<Grant>{{0, 4}, {1, 3}, {2, 3}}));
    EXPECT_EQ(rr.cursor(), 1u);
    EXPECT_EQ(rr.allocate(demand, 10), (std::vector<Grant>{{1, 4}, {2, 3}, {0, 3}}));
    rr.allocate(demand, 10);
    // over three slots every device has received 4 + 3 + 3 PRBs
}

TEST(RoundRobin, ThreeSlotTotalsEqual) {
    RoundRobinScheduler rr(3);
    const std::vector<int> demand = {100, 100, 100};
    std::vector<int> total(3);
    for (int s = 0; s < 3; ++s)
        for (const Grant& g : rr.allocate(demand, 10)) total[g.device] += g.prbs;
    EXPECT_EQ(total, (std::vector<int>{10, 10, 10}));
}

TEST(RoundRobin, MoreDevicesThanPrbsLeavesSomeOut) {
    RoundRobinScheduler rr(10);
    const std::vector<int> demand(10, 1);
    const auto grants = rr.allocate(demand, 7);
    EXPECT_EQ(grants.size(), 7u);
    for (const Grant& g : grants) EXPECT_EQ(g.prbs, 1);
}

TEST(RoundRobin, SmallDemandLeftoverIsReshared) {
    RoundRobinScheduler rr(3);
    const std::vector<int> demand = {1, 50, 50};
    EXPECT_EQ(rr.allocate(demand, 10), (std::vector<Grant>{{0, 1}, {1, 5}, {2, 4}}));
}

TEST(RoundRobin, EmptyQueue) {
    RoundRobinScheduler rr(3);
    const std::vector<int> demand = {0, 0, 0};
    EXPECT_TRUE(rr.allocate(demand, 10).empty());
}

TEST(RoundRobin, WorkConservingAndDemandBounded) {
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto n = static_cast<std::size_t>(1 + rng.uniform_index(12));
        RoundRobinScheduler rr(n, rng.uniform_index(n));
        std::vector<int> demand(n);
        for (auto& d : demand) d = rng.bernoulli(0.3) ? 0 : static_cast<int>(rng.uniform_index(40));
        const int capacity = static_cast<int>(1 + rng.uniform_index(100));
        int granted = 0;
        for (const Grant& g : rr.allocate(demand, capacity)) {
            ASSERT_LE(g.prbs, demand[g.device]);
            ASSERT_GT(g.prbs, 0);
            granted += g.prbs;
        }
        ASSERT_EQ(granted, std::min(capacity, std::accumulate(demand.begin(), demand.end(), 0)));
    }
}

TEST(RoundRobin, FairWhileAllBacklogged) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(1 + rng.uniform_index(10));
        RoundRobinScheduler rr(n);
        const std::vector<int> demand(n, 1000);
        std::vector<long> total(n);
        const int capacity = static_cast<int>(1 + rng.uniform_index(60));
        const int slots = static_cast<int>(1 + rng.uniform_index(50));
        for (int s = 0; s < slots; ++s)
            for (const Grant& g : rr.allocate(demand, capacity)) total[g.device] += g.prbs;
        const auto [lo, hi] = std::minmax_element(total.begin(), total.end());
        ASSERT_LE(*hi - *lo, static_cast<long>(n));
    }
}

TEST(TransportBlock, Examples) {
    EXPECT_EQ(tb_bits(0, 5.0), 0);
    EXPECT_EQ(tb_bits(100, 5.0), 72'240);
    EXPECT_EQ(tb_bits(7, 2.0), 2'022);
}

TEST(Bler, AtMcsSinr) {
    const BlerModel m;
    EXPECT_NEAR(m.bler(20.0, 20.0), 0.5 * std::exp(-2.0), 1e-15);
}

TEST(Bler, Clamped) {
    const BlerModel m;
    EXPECT_DOUBLE_EQ(m.bler(-10.0, 20.0), 0.5);
    EXPECT_DOUBLE_EQ(m.bler(40.0, 20.0), 1e-5);
}

TEST(Bler, NonIncreasingInSinr) {
    const BlerModel m;
    double prev = 1.0;
    for (double s = 0.0; s < 40.0; s += 0.25) {
        EXPECT_LE(m.bler(s, 15.0), prev);
        prev = m.bler(s, 15.0);
    }
}

TEST(ProfileNames, RoundTrip) {
    for (Profile p : kProfiles) EXPECT_EQ(profile_from_string(to_string(p)), p);
    EXPECT_EQ(plan_mode_from_string("dynamic"), PlanMode::kDynamic);
}
