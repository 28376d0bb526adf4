#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nrslice/rach.hpp"
#include "nrslice/slicing.hpp"
#include "nrslice/stats.hpp"
#include "nrslice/timebase.hpp"

namespace nrslice {

enum class DropReason : std::uint8_t { kNone, kHarqExhausted, kHorizon };

struct PacketRecord {
    Profile profile = Profile::kEmbb;
    std::uint32_t device = 0;
    std::uint32_t size_bytes = 0;
    SimTime created;
    std::optional<SimTime> delivered;
    DropReason drop_reason = DropReason::kNone;
    std::uint8_t interval = 0;  // 1-based

    bool dropped() const { return drop_reason != DropReason::kNone; }
    /// Only meaningful when delivered.
    SimTime latency() const { return *delivered - created; }
};

inline const SimTime kUrllcDeadline = SimTime::from_ms(std::int64_t{5});

/// Delivered bits over [first creation, last delivery].
class ThroughputAccumulator {
public:
    void add(const PacketRecord& r);
    void merge(const ThroughputAccumulator& o);

    std::uint64_t offered_packets() const { return offered_; }
    std::uint64_t delivered_packets() const { return delivered_; }
    std::uint64_t delivered_bytes() const { return bytes_; }

    /// Zero when nothing was delivered; see `empty_window()`.
    double bps() const;
    bool empty_window() const { return delivered_ == 0; }

private:
    std::uint64_t offered_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t bytes_ = 0;
    std::optional<SimTime> first_created_;
    std::optional<SimTime> last_delivered_;
};

/// Fraction of packets delivered within a deadline. Dropped and undelivered
/// packets count as late.
class ReliabilityAccumulator {
public:
    explicit ReliabilityAccumulator(SimTime deadline = kUrllcDeadline) : deadline_(deadline) {}
    void add(const PacketRecord& r);
    void merge(const ReliabilityAccumulator& o);

    std::uint64_t total() const { return total_; }
    std::uint64_t on_time() const { return on_time_; }
    /// Empty when no packet was offered.
    std::optional<double> reliability() const;

private:
    SimTime deadline_;
    std::uint64_t total_ = 0;
    std::uint64_t on_time_ = 0;
};

double throughput_bps(std::span<const PacketRecord> records);
std::optional<double> threshold_reliability(std::span<const PacketRecord> records, SimTime deadline = kUrllcDeadline);

/// Row key of a metric table. `interval` is "1".."N" or "combined".
struct MetricKey {
    std::string plan;
    std::string interval;
    std::string profile;
    std::string metric;

    friend auto operator<=>(const MetricKey&, const MetricKey&) = default;
};

inline constexpr std::string_view kCombined = "combined";

namespace metric {
inline constexpr std::string_view kThroughputPerDevice = "throughput_per_device_bps";
inline constexpr std::string_view kThroughputAggregate = "throughput_aggregate_bps";
inline constexpr std::string_view kReliability = "reliability";
inline constexpr std::string_view kOutage = "outage";
inline constexpr std::string_view kBlocking = "blocking_probability";
inline constexpr std::string_view kPreambleRetx = "avg_preamble_retx";
inline constexpr std::string_view kAccessDelay = "access_delay_ms";
inline constexpr std::string_view kDeliveryRatio = "delivery_ratio";
inline constexpr std::string_view kRaOccasions = "ra_occasions_used";
}  // namespace metric

/// Metric values of one seed.
using RunMetrics = std::map<MetricKey, double>;

struct AggregateValue {
    double mean = 0.0;
    double dev_lo = 0.0;
    double dev_hi = 0.0;
    std::size_t seeds = 0;

    friend bool operator==(const AggregateValue&, const AggregateValue&) = default;
};

using MetricTable = std::map<MetricKey, AggregateValue>;

/// Mean and one-sided deviations across seeds, per key. A key missing from a
/// seed is left out of that key's sample. The result does not depend on the
/// order of `runs`.
MetricTable aggregate_seeds(std::span<const RunMetrics> runs);

/// RACH metrics of one seed: per interval and over the union of all intervals' devices.
void add_rach_metrics(RunMetrics& out, std::string_view plan, std::span<const RaResults> per_interval);

}  // namespace nrslice
