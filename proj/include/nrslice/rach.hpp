#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nrslice/timebase.hpp"

namespace nrslice {

/// RA occasions: every `period_frames` frames, at the listed subframes.
struct RaSlotPattern {
    int period_frames = 1;
    std::vector<int> subframes;

    /// Throws ConfigError unless offsets are strictly increasing in 0-9 and the
    /// density is between one per two frames and one per subframe.
    void validate() const;
    double slots_per_frame() const { return static_cast<double>(subframes.size()) / period_frames; }

    friend bool operator==(const RaSlotPattern&, const RaSlotPattern&) = default;
};

using PatternTable = std::map<int, RaSlotPattern>;

/// Built-in PRACH configuration indices: 16 (1/frame), 19 (2/frame), 22 (3/frame).
const PatternTable& builtin_patterns();

/// Looks up `index` in `overrides` first, then the built-in table. Throws
/// ConfigError listing supported indices when unknown.
RaSlotPattern pattern_for_index(int index, const PatternTable& overrides = {});

/// RA slot start times in [0, horizon).
std::vector<SimTime> ra_slot_schedule(const RaSlotPattern& pattern, SimTime horizon);

/// First RA slot start at or after `t`.
SimTime next_ra_slot(const RaSlotPattern& pattern, SimTime t);

/// When a UE whose preamble collided learns it must retry.
enum class CollisionFeedback : std::uint8_t {
    kRarReception,    // with the RAR carrying the backoff indicator
    kRarWindowExpiry, // when the RAR window closes without a response
};
std::string_view to_string(CollisionFeedback f);
CollisionFeedback collision_feedback_from_string(std::string_view s);

struct RachConfig {
    int prach_config_index = 19;
    RaSlotPattern pattern = {1, {1, 6}};
    int num_preambles = 60;
    int preamble_trans_max = 10;
    SimTime rar_window = SimTime::from_ms(std::int64_t{5});
    SimTime backoff_indicator = SimTime::from_ms(std::int64_t{20});
    SimTime rar_processing_delay = SimTime::from_ms(std::int64_t{2});
    CollisionFeedback collision_feedback = CollisionFeedback::kRarReception;

    /// Config with `pattern` resolved from `index`.
    static RachConfig for_index(int index, const PatternTable& overrides = {});

    void validate() const;

    friend bool operator==(const RachConfig&, const RachConfig&) = default;
};

enum class RaState : std::uint8_t { kWaitingFirstSlot, kWaitingRar, kBackoff, kSucceeded, kBlocked };

struct UeRaState {
    std::uint32_t id = 0;
    RaState state = RaState::kWaitingFirstSlot;
    int attempts = 0;
    SimTime arrival{};
    SimTime first_tx_time{};
    std::optional<SimTime> success_time;

    friend bool operator==(const UeRaState&, const UeRaState&) = default;
};

struct RaResults {
    std::vector<UeRaState> ues;
    std::size_t succeeded = 0;
    std::size_t blocked = 0;
    std::size_t ra_slots_used = 0;  // RA occasions carrying at least one preamble

    double blocking_probability() const {
        return ues.empty() ? 0.0 : static_cast<double>(blocked) / static_cast<double>(ues.size());
    }
    friend bool operator==(const RaResults&, const RaResults&) = default;
};

/// Contention-based random access at preamble level. Each UE sends a uniformly
/// chosen preamble at its next eligible RA slot; a preamble picked by exactly
/// one UE succeeds with the RAR at slot + rar_processing_delay. Collided UEs
/// learn of the failure per `collision_feedback`, back off U[0, BI] and retry at
/// the next RA slot, until preamble_trans_max attempts. Deterministic in `seed`.
RaResults simulate_rach(std::span<const SimTime> arrivals, const RachConfig& config, std::uint64_t seed);
RaResults simulate_rach(std::size_t n_arrivals, const RachConfig& config, std::uint64_t seed);

/// RAR reception minus first preamble. Throws std::logic_error unless succeeded.
SimTime access_delay(const UeRaState& ue);

struct RachMetrics {
    std::size_t total = 0;
    std::size_t succeeded = 0;
    double blocking_probability = 0.0;
    double avg_preamble_retx = 0.0;  // over succeeded UEs, attempts - 1
    double delay_mean_ms = 0.0;
    double delay_dev_lo_ms = 0.0;
    double delay_dev_hi_ms = 0.0;
};

/// Throws std::invalid_argument on empty results.
RachMetrics rach_metrics(const RaResults& results);

}  // namespace nrslice
