#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nrslice/timebase.hpp"

namespace nrslice {

enum class Profile : std::uint8_t { kEmbb = 0, kUrllc = 1, kMmtc = 2 };
inline constexpr std::array<Profile, 3> kProfiles = {Profile::kEmbb, Profile::kUrllc, Profile::kMmtc};

std::string_view to_string(Profile p);
Profile profile_from_string(std::string_view s);

enum class Direction : std::uint8_t { kDownlink, kUplink };

enum class PlanMode : std::uint8_t { kStatic, kDynamic };
std::string_view to_string(PlanMode m);
PlanMode plan_mode_from_string(std::string_view s);

/// Bandwidth fractions indexed by Profile (eMBB, URLLC, mMTC).
using Split = std::array<double, 3>;

struct SliceConfig {
    Profile profile = Profile::kEmbb;
    double bandwidth_fraction = 0.0;
    Numerology numerology{0};
    Direction direction = Direction::kDownlink;
    double bandwidth_hz = 0.0;
    int prbs = 0;
};

using SliceSet = std::array<SliceConfig, 3>;

struct SlicePlan {
    PlanMode mode = PlanMode::kStatic;
    std::vector<SliceSet> intervals;
    SimTime interval_duration = SimTime::from_s(std::int64_t{600});

    SimTime horizon() const { return interval_duration * static_cast<std::int64_t>(intervals.size()); }
};

struct CarrierConfig {
    double bandwidth_hz = 20e6;
    double guard_fraction = 0.10;
    std::array<int, 3> numerology = {0, 2, 0};
    std::size_t intervals = 3;
    SimTime interval_duration = SimTime::from_s(std::int64_t{600});
};

/// 55/30/15 static; 40/30/30, 30/60/10, 70/20/10 dynamic.
std::vector<Split> default_splits(PlanMode mode);

/// Builds a plan from one split (static) or one split per interval (dynamic).
/// Throws ConfigError when a split does not sum to 1 and SliceTooNarrow when a
/// slice gets zero PRBs.
SlicePlan build_slice_plan(PlanMode mode, std::span<const Split> splits, const CarrierConfig& carrier = {});
SlicePlan build_slice_plan(PlanMode mode, const CarrierConfig& carrier = {});

/// Slice configuration active at `t`; intervals are half-open. Empty past the horizon.
std::optional<SliceSet> slices_at(const SlicePlan& plan, SimTime t);
std::optional<std::size_t> interval_at(const SlicePlan& plan, SimTime t);

struct Grant {
    std::size_t device;
    int prbs;
    friend bool operator==(const Grant&, const Grant&) = default;
};

/// Round-robin PRB split with a rotating cursor. Capacity is shared equally
/// among devices with demand; devices asking for less than their share get
/// their demand and the leftover is re-shared; the remainder goes one PRB each
/// to devices starting at the cursor. The cursor advances by one per call.
class RoundRobinScheduler {
public:
    explicit RoundRobinScheduler(std::size_t num_devices, std::size_t cursor = 0)
        : num_devices_(num_devices), cursor_(cursor) {}

    /// `demand_prbs[i]` is device i's demand, 0 if not backlogged.
    std::vector<Grant> allocate(std::span<const int> demand_prbs, int capacity_prbs);

    std::size_t cursor() const { return cursor_; }
    std::size_t num_devices() const { return num_devices_; }

private:
    std::size_t num_devices_;
    std::size_t cursor_;
    std::vector<std::size_t> order_;
    std::vector<int> granted_;
};

inline constexpr double kTbOverhead = 0.86;

/// Transport block bits for `prbs` PRBs over one slot (12 subcarriers x 14 symbols).
std::int64_t tb_bits(int prbs, double se_bps_hz);

/// Bits one PRB carries per slot.
inline double bits_per_prb(double se_bps_hz) {
    return kSubcarriersPerPrb * kSymbolsPerSlot * se_bps_hz * kTbOverhead;
}

struct LatencyPipeline {
    int mac_to_phy_slots = 2;
    SimTime tb_decode = SimTime::from_us(std::int64_t{100});
    int harq_feedback_slots = 1;
    int max_harq_retx = 3;

    friend bool operator==(const LatencyPipeline&, const LatencyPipeline&) = default;
};

/// BLER = 0.5 exp(-(sinr - threshold)), threshold `margin_db` below the SINR
/// used for MCS selection, clamped to [floor, ceiling].
struct BlerModel {
    double margin_db = 2.0;
    double floor = 1e-5;
    double ceiling = 0.5;

    double bler(double sinr_db, double mcs_sinr_db) const;

    friend bool operator==(const BlerModel&, const BlerModel&) = default;
};

}  // namespace nrslice
