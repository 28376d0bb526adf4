#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "nrslice/mobility.hpp"
#include "nrslice/scenario.hpp"
#include "nrslice/slicing.hpp"

namespace nrslice {

enum class DeviceKind : std::uint8_t { kAgv, kWorker, kSmartTag };

/// A device on one slice. `channel` holds one quasi-static draw per interval.
struct Device {
    std::uint32_t id = 0;
    DeviceKind kind = DeviceKind::kWorker;
    Trajectory trajectory;
    std::vector<ChannelDraw> channel;
};

struct Arrival {
    SimTime t;
    std::uint32_t device = 0;
    std::uint32_t bytes = 0;
    std::uint8_t interval = 0;  // 1-based

    friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Packets every `period` from `first` while t < `end`.
struct PeriodicFlow {
    std::uint32_t device = 0;
    SimTime first;
    SimTime period;
    SimTime end;
    std::uint32_t bytes = 0;
    std::uint8_t interval = 0;

    std::uint64_t packet_count() const;
};

/// Offered load of one slice: periodic flows plus explicit one-off arrivals.
struct TrafficPlan {
    std::vector<PeriodicFlow> flows;
    std::vector<Arrival> bursts;  // sorted by (t, device)

    void append(const TrafficPlan& other);
    std::uint64_t packet_count() const;
    std::uint64_t offered_bytes() const;
    /// Materializes every arrival in time order. Meant for tests and small plans.
    std::vector<Arrival> expand() const;
};

/// Merges a TrafficPlan into one time-ordered stream; ties break on device id.
class ArrivalStream {
public:
    explicit ArrivalStream(const TrafficPlan& plan);

    std::optional<SimTime> peek_time() const;
    /// Pops the next arrival if it is at or before `t`.
    std::optional<Arrival> pop_until(SimTime t);

private:
    struct Head {
        SimTime t;
        std::uint32_t device;
        std::size_t flow;
        bool operator>(const Head& o) const { return t != o.t ? t > o.t : device > o.device; }
    };
    const TrafficPlan* plan_;
    std::priority_queue<Head, std::vector<Head>, std::greater<>> heads_;
    std::size_t next_burst_ = 0;
};

/// Offered traffic of `profile` during interval `interval` (0-based):
///  - URLLC: one flow per active AGV at the URLLC rate, phase U[0, period)
///  - eMBB: one CBR flow per worker at the interval's worker rate
///  - mMTC: a batch of simultaneous arrivals within the first subframe plus
///    the periodic tag reports falling in the interval
/// Deterministic in `seed`; each profile uses its own stream.
TrafficPlan generate_traffic(const Scenario& s, Profile profile, std::size_t interval, std::uint64_t seed);

/// Devices of `profile`'s slice over the whole run, with trajectories and channel draws.
std::vector<Device> build_devices(const Scenario& s, Profile profile, std::uint64_t seed);

/// Static smart-tag position inside the racks.
Position3D smart_tag_position(const Floorplan& f, int tag, int total);

}  // namespace nrslice
