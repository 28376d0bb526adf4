#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nrslice/channel.hpp"
#include "nrslice/rach.hpp"
#include "nrslice/slicing.hpp"

namespace nrslice {

/// Floorplan point sets.
enum class Site : std::uint8_t {
    kTrailer = 0,        // P1
    kPalletSide = 1,     // P2
    kParcelSide = 2,     // P3
    kRackAccess = 3,     // P4
    kWorkerEntrance = 4, // P5
};
inline constexpr std::size_t kNumSites = 5;

struct Box {
    Position3D min;
    Position3D max;
    friend bool operator==(const Box&, const Box&) = default;
};

struct Floorplan {
    Position3D bounds{40.0, 30.0, 12.0};  // hall extents from the origin
    Position3D gnb{20.0, 15.0, 10.0};
    std::array<std::vector<Position3D>, kNumSites> sites;
    std::vector<Box> racks;

    const std::vector<Position3D>& points(Site s) const { return sites[static_cast<std::size_t>(s)]; }
    bool contains(const Position3D& p) const;

    friend bool operator==(const Floorplan&, const Floorplan&) = default;
};

/// A round trip between two point sets, repeated every `period_s`.
struct RouteClass {
    Site from = Site::kParcelSide;
    Site to = Site::kRackAccess;
    double period_s = 60.0;
    friend bool operator==(const RouteClass&, const RouteClass&) = default;
};

struct FleetSpec {
    int workers = 5;
    int smart_tags = 1000;
    int max_agvs = 10;
    double agv_height_m = 0.5;
    double worker_height_m = 1.5;
    double agv_speed_mps = 1.5;
    double worker_speed_mps = 1.0;
    RouteClass worker_route{Site::kWorkerEntrance, Site::kRackAccess, 300.0};
    int embb_packet_bytes = 1000;
    int urllc_packet_bytes = 64;
    double urllc_rate_hz = 10.0;
    int mmtc_packet_bytes = 64;
    double mmtc_report_period_s = 3600.0;

    friend bool operator==(const FleetSpec&, const FleetSpec&) = default;
};

struct IntervalSpec {
    double duration_s = 600.0;
    int agvs = 3;
    RouteClass agv_route{Site::kTrailer, Site::kPalletSide, 300.0};
    double worker_rate_bps = 4e6;
    int mmtc_arrivals = 1000;
    int static_prach_index = 19;
    int dynamic_prach_index = 22;

    friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

struct NetworkSpec {
    double bandwidth_hz = 20e6;
    double guard_fraction = 0.10;
    ChannelParams channel;
    LatencyPipeline pipeline;
    BlerModel bler;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct SlicesSpec {
    std::array<int, 3> numerology = {0, 2, 0};
    Split static_split = {0.55, 0.30, 0.15};
    std::vector<Split> dynamic_splits = {{0.40, 0.30, 0.30}, {0.30, 0.60, 0.10}, {0.70, 0.20, 0.10}};

    friend bool operator==(const SlicesSpec&, const SlicesSpec&) = default;
};

/// RACH parameters shared by all intervals; the PRACH index lives per interval.
struct RachSpec {
    RachConfig base;
    PatternTable patterns;  // overrides of the built-in index table

    RachConfig config_for(int prach_index) const;
    friend bool operator==(const RachSpec&, const RachSpec&) = default;
};

struct Scenario {
    NetworkSpec network;
    SlicesSpec slices;
    RachSpec rach;
    Floorplan floorplan;
    FleetSpec fleet;
    std::vector<IntervalSpec> intervals;

    CarrierConfig carrier() const;
    SlicePlan plan(PlanMode mode) const;
    SimTime interval_start(std::size_t i) const;
    SimTime horizon() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Built-in distribution-center scenario (same content as scenarios/distribution_center.scenario).
Scenario default_scenario();

/// Parses and validates a scenario document. Throws ConfigError with the field
/// path on schema violations.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Checks cross-field invariants (slice sums, PRB counts, points inside bounds...).
void validate(const Scenario& s);

/// Canonical serialization: sorted keys, fixed formatting. Equal scenarios
/// serialize to identical bytes.
std::string serialize_scenario(const Scenario& s);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

std::string_view to_string(Site s);
Site site_from_string(std::string_view s);

}  // namespace nrslice
