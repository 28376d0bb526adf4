#include "nrslice/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace nrslice {

void ThroughputAccumulator::add(const PacketRecord& r) {
    ++offered_;
    if (!first_created_ || r.created < *first_created_) first_created_ = r.created;
    if (!r.delivered) return;
    ++delivered_;
    bytes_ += r.size_bytes;
    if (!last_delivered_ || *r.delivered > *last_delivered_) last_delivered_ = r.delivered;
}

void ThroughputAccumulator::merge(const ThroughputAccumulator& o) {
    offered_ += o.offered_;
    delivered_ += o.delivered_;
    bytes_ += o.bytes_;
    if (o.first_created_ && (!first_created_ || *o.first_created_ < *first_created_)) first_created_ = o.first_created_;
    if (o.last_delivered_ && (!last_delivered_ || *o.last_delivered_ > *last_delivered_))
        last_delivered_ = o.last_delivered_;
}

double ThroughputAccumulator::bps() const {
    if (delivered_ == 0) return 0.0;
    const SimTime window = *last_delivered_ - *first_created_;
    return 8.0 * static_cast<double>(bytes_) / window.seconds();
}

void ReliabilityAccumulator::add(const PacketRecord& r) {
    ++total_;
    if (r.delivered && r.latency() < deadline_) ++on_time_;
}

void ReliabilityAccumulator::merge(const ReliabilityAccumulator& o) {
    total_ += o.total_;
    on_time_ += o.on_time_;
}

std::optional<double> ReliabilityAccumulator::reliability() const {
    if (total_ == 0) return std::nullopt;
    return static_cast<double>(on_time_) / static_cast<double>(total_);
}

double throughput_bps(std::span<const PacketRecord> records) {
    ThroughputAccumulator acc;
    for (const auto& r : records) acc.add(r);
    return acc.bps();
}

std::optional<double> threshold_reliability(std::span<const PacketRecord> records, SimTime deadline) {
    ReliabilityAccumulator acc(deadline);
    for (const auto& r : records) acc.add(r);
    return acc.reliability();
}

MetricTable aggregate_seeds(std::span<const RunMetrics> runs) {
    std::map<MetricKey, std::vector<double>> samples;
    for (const auto& run : runs)
        for (const auto& [key, value] : run) samples[key].push_back(value);
    MetricTable out;
    for (auto& [key, xs] : samples) {
        std::sort(xs.begin(), xs.end());  // fixes the summation order
        const Spread s = spread_of(xs);
        out[key] = {s.mean, s.dev_lo, s.dev_hi, xs.size()};
    }
    return out;
}

namespace {

void put_rach(RunMetrics& out, std::string_view plan, const std::string& interval, const RachMetrics& m,
              std::size_t occasions) {
    const std::string profile(to_string(Profile::kMmtc));
    out[{std::string(plan), interval, profile, std::string(metric::kBlocking)}] = m.blocking_probability;
    out[{std::string(plan), interval, profile, std::string(metric::kRaOccasions)}] = static_cast<double>(occasions);
    if (m.succeeded == 0) return;  // retx and delay are defined over successful UEs
    out[{std::string(plan), interval, profile, std::string(metric::kPreambleRetx)}] = m.avg_preamble_retx;
    out[{std::string(plan), interval, profile, std::string(metric::kAccessDelay)}] = m.delay_mean_ms;
}

}  // namespace

void add_rach_metrics(RunMetrics& out, std::string_view plan, std::span<const RaResults> per_interval) {
    RaResults all;
    for (std::size_t i = 0; i < per_interval.size(); ++i) {
        const RaResults& r = per_interval[i];
        if (r.ues.empty()) continue;
        put_rach(out, plan, fmt::format("{}", i + 1), rach_metrics(r), r.ra_slots_used);
        all.ues.insert(all.ues.end(), r.ues.begin(), r.ues.end());
        all.succeeded += r.succeeded;
        all.blocked += r.blocked;
        all.ra_slots_used += r.ra_slots_used;
    }
    if (!all.ues.empty()) put_rach(out, plan, std::string(kCombined), rach_metrics(all), all.ra_slots_used);
}

}  // namespace nrslice
