#include "nrslice/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nrslice {

std::uint64_t PeriodicFlow::packet_count() const {
    if (first >= end || period.ns <= 0) return 0;
    return static_cast<std::uint64_t>((end - first).ns + period.ns - 1) / static_cast<std::uint64_t>(period.ns);
}

void TrafficPlan::append(const TrafficPlan& other) {
    flows.insert(flows.end(), other.flows.begin(), other.flows.end());
    std::vector<Arrival> merged;
    merged.reserve(bursts.size() + other.bursts.size());
    auto less = [](const Arrival& a, const Arrival& b) { return a.t != b.t ? a.t < b.t : a.device < b.device; };
    std::merge(bursts.begin(), bursts.end(), other.bursts.begin(), other.bursts.end(), std::back_inserter(merged),
               less);
    bursts = std::move(merged);
}

std::uint64_t TrafficPlan::packet_count() const {
    std::uint64_t n = bursts.size();
    for (const auto& f : flows) n += f.packet_count();
    return n;
}

std::uint64_t TrafficPlan::offered_bytes() const {
    std::uint64_t b = 0;
    for (const auto& a : bursts) b += a.bytes;
    for (const auto& f : flows) b += f.packet_count() * f.bytes;
    return b;
}

std::vector<Arrival> TrafficPlan::expand() const {
    std::vector<Arrival> out;
    ArrivalStream stream(*this);
    while (auto a = stream.pop_until(SimTime{INT64_MAX})) out.push_back(*a);
    return out;
}

ArrivalStream::ArrivalStream(const TrafficPlan& plan) : plan_(&plan) {
    for (std::size_t i = 0; i < plan.flows.size(); ++i) {
        const auto& f = plan.flows[i];
        if (f.first < f.end && f.period.ns > 0) heads_.push({f.first, f.device, i});
    }
}

std::optional<SimTime> ArrivalStream::peek_time() const {
    std::optional<SimTime> t;
    if (!heads_.empty()) t = heads_.top().t;
    if (next_burst_ < plan_->bursts.size()) {
        const SimTime b = plan_->bursts[next_burst_].t;
        if (!t || b < *t) t = b;
    }
    return t;
}

std::optional<Arrival> ArrivalStream::pop_until(SimTime t) {
    const bool have_flow = !heads_.empty() && heads_.top().t <= t;
    const bool have_burst = next_burst_ < plan_->bursts.size() && plan_->bursts[next_burst_].t <= t;
    if (!have_flow && !have_burst) return std::nullopt;
    bool take_burst = have_burst;
    if (have_flow && have_burst) {
        const Arrival& b = plan_->bursts[next_burst_];
        const Head& h = heads_.top();
        take_burst = b.t != h.t ? b.t < h.t : b.device <= h.device;
    }
    if (take_burst) return plan_->bursts[next_burst_++];
    Head h = heads_.top();
    heads_.pop();
    const auto& f = plan_->flows[h.flow];
    Arrival a{h.t, f.device, f.bytes, f.interval};
    const SimTime next = h.t + f.period;
    if (next < f.end) heads_.push({next, f.device, h.flow});
    return a;
}

namespace {

std::uint64_t profile_tag(Profile p) { return static_cast<std::uint64_t>(p); }

}  // namespace

TrafficPlan generate_traffic(const Scenario& s, Profile profile, std::size_t interval, std::uint64_t seed) {
    TrafficPlan plan;
    const IntervalSpec& iv = s.intervals.at(interval);
    const SimTime start = s.interval_start(interval);
    const SimTime end = start + SimTime::from_s(iv.duration_s);
    const auto tag = static_cast<std::uint8_t>(interval + 1);
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::kTraffic), profile_tag(profile), interval}));

    switch (profile) {
        case Profile::kUrllc: {
            const SimTime period = SimTime::from_s(1.0 / s.fleet.urllc_rate_hz);
            for (int k = 0; k < iv.agvs; ++k) {
                const SimTime phase{static_cast<std::int64_t>(rng.uniform01() * static_cast<double>(period.ns))};
                plan.flows.push_back({static_cast<std::uint32_t>(k), start + phase, period, end,
                                      static_cast<std::uint32_t>(s.fleet.urllc_packet_bytes), tag});
            }
            break;
        }
        case Profile::kEmbb: {
            if (iv.worker_rate_bps <= 0.0) break;
            const SimTime period = SimTime::from_s(8.0 * s.fleet.embb_packet_bytes / iv.worker_rate_bps);
            for (int k = 0; k < s.fleet.workers; ++k) {
                const SimTime phase{static_cast<std::int64_t>(rng.uniform01() * static_cast<double>(period.ns))};
                plan.flows.push_back({static_cast<std::uint32_t>(k), start + phase, period, end,
                                      static_cast<std::uint32_t>(s.fleet.embb_packet_bytes), tag});
            }
            break;
        }
        case Profile::kMmtc: {
            const int tags = s.fleet.smart_tags;
            if (tags == 0) break;
            std::vector<std::uint32_t> ids(static_cast<std::size_t>(tags));
            std::iota(ids.begin(), ids.end(), 0U);
            for (std::size_t i = ids.size() - 1; i > 0; --i) std::swap(ids[i], ids[rng.uniform_index(i + 1)]);
            const auto bytes = static_cast<std::uint32_t>(s.fleet.mmtc_packet_bytes);
            for (int k = 0; k < iv.mmtc_arrivals; ++k) {
                const SimTime offset{static_cast<std::int64_t>(rng.uniform01() * kSubframeDuration.ns)};
                plan.bursts.push_back({start + offset, ids[static_cast<std::size_t>(k)], bytes, tag});
            }
            // background reports: every tag reports once per period at a fixed per-tag phase
            Rng phase_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::kTraffic), profile_tag(profile), 99}));
            const SimTime report = SimTime::from_s(s.fleet.mmtc_report_period_s);
            for (int k = 0; k < tags; ++k) {
                SimTime t{static_cast<std::int64_t>(phase_rng.uniform01() * static_cast<double>(report.ns))};
                while (t < start) t += report;
                for (; t < end; t += report) plan.bursts.push_back({t, static_cast<std::uint32_t>(k), bytes, tag});
            }
            std::sort(plan.bursts.begin(), plan.bursts.end(),
                      [](const Arrival& a, const Arrival& b) { return a.t != b.t ? a.t < b.t : a.device < b.device; });
            break;
        }
    }
    return plan;
}

Position3D smart_tag_position(const Floorplan& f, int tag, int total) {
    const auto racks = static_cast<int>(f.racks.size());
    const Box& r = f.racks[static_cast<std::size_t>(tag % racks)];
    const int per_rack = (total + racks - 1) / racks;
    const int slot = tag / racks;
    // spread along the rack length over four shelf levels
    const int columns = std::max(1, (per_rack + 3) / 4);
    const double fx = (slot % columns + 0.5) / columns;
    const double fz = (slot / columns + 0.5) / 4.0;
    return {r.min.x + fx * (r.max.x - r.min.x), 0.5 * (r.min.y + r.max.y), r.min.z + fz * (r.max.z - r.min.z)};
}

std::vector<Device> build_devices(const Scenario& s, Profile profile, std::uint64_t seed) {
    std::vector<Device> devices;
    const std::size_t n_int = s.intervals.size();
    const SimTime horizon = s.horizon();
    auto draw_channels = [&](std::uint32_t id) {
        std::vector<ChannelDraw> draws;
        for (std::size_t i = 0; i < n_int; ++i) {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::kChannel), profile_tag(profile), id, i}));
            draws.push_back(draw_channel(rng));
        }
        return draws;
    };
    auto mobility_rng = [&](std::uint32_t id, std::size_t interval) {
        return Rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::kMobility), profile_tag(profile), id, interval}));
    };

    switch (profile) {
        case Profile::kEmbb:
            for (int k = 0; k < s.fleet.workers; ++k) {
                const auto id = static_cast<std::uint32_t>(k);
                Mobile m(s.floorplan, s.fleet.worker_route, s.fleet.worker_speed_mps, s.fleet.worker_height_m,
                         mobility_rng(id, 0));
                devices.push_back({id, DeviceKind::kWorker, record_trajectory(m, SimTime{0}, horizon),
                                   draw_channels(id)});
            }
            break;
        case Profile::kUrllc: {
            int max_agvs = 0;
            for (const auto& iv : s.intervals) max_agvs = std::max(max_agvs, iv.agvs);
            for (int k = 0; k < max_agvs; ++k) {
                const auto id = static_cast<std::uint32_t>(k);
                std::vector<Trajectory::Waypoint> path;
                for (std::size_t i = 0; i < n_int; ++i) {
                    const IntervalSpec& iv = s.intervals[i];
                    const SimTime a = s.interval_start(i);
                    const SimTime b = a + SimTime::from_s(iv.duration_s);
                    if (k >= iv.agvs) continue;  // parked: no traffic in this interval
                    Mobile m(s.floorplan, iv.agv_route, s.fleet.agv_speed_mps, s.fleet.agv_height_m,
                             mobility_rng(id, i));
                    const auto piece = record_trajectory(m, a, b).points();
                    path.insert(path.end(), piece.begin(), piece.end());
                }
                if (path.empty()) path.push_back({SimTime{0}, s.floorplan.gnb});
                devices.push_back({id, DeviceKind::kAgv, Trajectory(std::move(path)), draw_channels(id)});
            }
            break;
        }
        case Profile::kMmtc:
            for (int k = 0; k < s.fleet.smart_tags; ++k) {
                const auto id = static_cast<std::uint32_t>(k);
                devices.push_back({id, DeviceKind::kSmartTag,
                                   Trajectory::fixed(smart_tag_position(s.floorplan, k, s.fleet.smart_tags)),
                                   draw_channels(id)});
            }
            break;
    }
    return devices;
}

}  // namespace nrslice
