#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nrslice/channel.hpp"
#include "nrslice/metrics.hpp"
#include "nrslice/slicing.hpp"
#include "nrslice/traffic.hpp"

namespace nrslice {

/// One slice's configuration over the run; `per_interval[i]` applies during
/// [i * interval_duration, (i + 1) * interval_duration).
struct SliceRunConfig {
    Profile profile = Profile::kEmbb;
    std::vector<SliceConfig> per_interval;
    SimTime interval_duration = SimTime::from_s(std::int64_t{600});
    Position3D gnb;
    ChannelParams channel;
    LatencyPipeline pipeline;
    BlerModel bler;
    SimTime deadline = kUrllcDeadline;
    bool keep_records = false;

    SimTime horizon() const { return interval_duration * static_cast<std::int64_t>(per_interval.size()); }
};

struct TbContext {
    std::uint32_t device = 0;
    SimTime slot;          // scheduling decision time
    double sinr_db = 0.0;
    int harq_round = 0;    // highest round among the carried segments, 0 = first transmission
    double bler = 0.0;     // from the configured BlerModel
};

/// Returns true when the transport block fails to decode.
using TbErrorModel = std::function<bool(const TbContext&, Rng&)>;

struct SliceRunStats {
    std::uint64_t transport_blocks = 0;
    std::uint64_t tb_failures = 0;
    std::uint64_t harq_drops = 0;
    std::uint64_t horizon_drops = 0;
    std::uint64_t stalled_device_slots = 0;  // backlogged but below the SINR floor
    std::size_t clamped_distances = 0;
};

struct SliceRunResult {
    std::vector<std::vector<ThroughputAccumulator>> throughput;  // [interval][device], by creation interval
    std::vector<ReliabilityAccumulator> reliability;             // [interval]
    std::vector<PacketRecord> records;                           // only with keep_records
    SliceRunStats stats;
};

/// Slot-level simulation of one slice. Each slot the round-robin scheduler
/// shares the slice PRBs among backlogged devices; a grant becomes one
/// transport block sized from the device's current SINR. A TB is on air
/// `mac_to_phy_slots` after the decision, decodes `tb_decode` after the end of
/// its slot, and on failure its segments are ready again `harq_feedback_slots`
/// later. Pending retransmissions go first. A packet is dropped once a segment
/// fails `max_harq_retx` retransmissions; packets not delivered by the horizon
/// are dropped as well. Slices never share state, so each can run on its own.
SliceRunResult simulate_slice(const SliceRunConfig& config, std::span<const Device> devices,
                              const TrafficPlan& traffic, std::uint64_t harq_seed, const TbErrorModel& error_model = {});

}  // namespace nrslice
