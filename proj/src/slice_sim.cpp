#include "nrslice/slice_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

namespace nrslice {

namespace {

const SimTime kSinrRefresh = SimTime::from_ms(std::int64_t{10});

struct PacketState {
    SimTime created;
    std::uint32_t bytes = 0;
    std::uint8_t interval = 0;
    std::int64_t unsent = 0;       // bits never put in a TB
    std::int64_t outstanding = 0;  // bits not yet decoded
    SimTime last_rx;
    bool done = false;
};

struct Segment {
    SimTime ready;
    std::uint64_t seq = 0;
    std::int64_t bits = 0;
    int round = 0;
};

struct DeviceState {
    std::deque<PacketState> packets;
    std::uint64_t base_seq = 0;    // sequence number of packets.front()
    std::uint64_t next_unsent = 0; // first packet with unsent bits
    std::int64_t unsent_bits = 0;
    std::vector<Segment> retx;     // sorted by ready time
    std::optional<std::size_t> cache_interval;
    SimTime cache_until;
    double sinr = 0.0;
    double se = 0.0;

    PacketState& at(std::uint64_t seq) { return packets[static_cast<std::size_t>(seq - base_seq)]; }
    bool live(std::uint64_t seq) const { return seq >= base_seq && !packets[static_cast<std::size_t>(seq - base_seq)].done; }
};

SimTime ceil_to(SimTime t, SimTime step) {
    const std::int64_t q = (t.ns + step.ns - 1) / step.ns;
    return SimTime{q * step.ns};
}

class Engine {
public:
    Engine(const SliceRunConfig& cfg, std::span<const Device> devices, const TrafficPlan& traffic,
           std::uint64_t harq_seed, const TbErrorModel& error_model)
        : cfg_(cfg), devices_(devices), stream_(traffic), rng_(harq_seed), error_model_(error_model),
          state_(devices.size()), scheduler_(devices.size()) {
        const std::size_t n_int = cfg.per_interval.size();
        result_.throughput.assign(n_int, std::vector<ThroughputAccumulator>(devices.size()));
        result_.reliability.assign(n_int, ReliabilityAccumulator(cfg.deadline));
    }

    SliceRunResult run() {
        const SimTime horizon = cfg_.horizon();
        std::vector<int> demand(devices_.size());
        std::vector<double> se(devices_.size());
        SimTime t{0};
        if (auto first = stream_.peek_time()) t = align(*first);
        while (t < horizon) {
            const auto interval = static_cast<std::size_t>(t.ns / cfg_.interval_duration.ns);
            const SliceConfig& slice = cfg_.per_interval[interval];
            const SimTime slot = slot_duration(slice.numerology);
            admit(t);

            bool any = false;
            for (std::size_t d = 0; d < devices_.size(); ++d) {
                demand[d] = 0;
                const std::int64_t ready = ready_bits(d, t);
                if (ready == 0) continue;
                refresh_sinr(d, t, interval);
                se[d] = state_[d].se;
                if (se[d] <= 0.0) {
                    ++result_.stats.stalled_device_slots;
                    continue;
                }
                demand[d] = prbs_for(ready, se[d], slice.prbs);
                any = true;
            }
            if (any) {
                for (const Grant& g : scheduler_.allocate(demand, slice.prbs))
                    transmit(g.device, t, slot, tb_bits(g.prbs, se[g.device]));
            }
            t = next_time(t + slot);
        }
        drain(horizon);
        return std::move(result_);
    }

private:
    SimTime align(SimTime t) const {
        const auto interval = static_cast<std::size_t>(t.ns / cfg_.interval_duration.ns);
        if (interval >= cfg_.per_interval.size()) return t;
        return ceil_to(t, slot_duration(cfg_.per_interval[interval].numerology));
    }

    void admit(SimTime t) {
        while (auto a = stream_.pop_until(t)) enqueue(*a);
    }

    void enqueue(const Arrival& a) {
        DeviceState& s = state_.at(a.device);
        const std::int64_t bits = 8 * static_cast<std::int64_t>(a.bytes);
        s.packets.push_back({a.t, a.bytes, a.interval, bits, bits, a.t, false});
        s.unsent_bits += bits;
    }

    std::int64_t ready_bits(std::size_t d, SimTime t) const {
        const DeviceState& s = state_[d];
        std::int64_t bits = s.unsent_bits;
        for (const Segment& seg : s.retx) {
            if (seg.ready > t) break;
            if (s.live(seg.seq)) bits += seg.bits;
        }
        return bits;
    }

    void refresh_sinr(std::size_t d, SimTime t, std::size_t interval) {
        DeviceState& s = state_[d];
        if (s.cache_interval == interval && t < s.cache_until) return;
        const SliceConfig& slice = cfg_.per_interval[interval];
        const ChannelParams& ch = cfg_.channel;
        const Position3D pos = devices_[d].trajectory.at(t);
        const LinkState link = devices_[d].channel.at(interval).state_at(distance_2d(cfg_.gnb, pos), ch);
        const double pl = pathloss_db(cfg_.gnb, pos, ch.frequency_ghz, link, &result_.stats.clamped_distances);
        const bool dl = slice.direction == Direction::kDownlink;
        s.sinr = sinr_db(dl ? ch.gnb_tx_power_dbm : ch.ue_tx_power_dbm, pl, slice.bandwidth_hz,
                         dl ? ch.noise_figure_dl_db : ch.noise_figure_ul_db);
        s.se = spectral_efficiency(s.sinr, ch);
        s.cache_interval = interval;
        s.cache_until = t + kSinrRefresh;
    }

    static int prbs_for(std::int64_t bits, double se, int capacity) {
        const double need = std::ceil(static_cast<double>(bits) / bits_per_prb(se));
        if (need >= capacity) return capacity;
        int prbs = std::max(1, static_cast<int>(need));
        while (prbs < capacity && tb_bits(prbs, se) < bits) ++prbs;
        return prbs;
    }

    void transmit(std::size_t d, SimTime t, SimTime slot, std::int64_t budget) {
        if (budget <= 0) return;
        DeviceState& s = state_[d];
        std::vector<Segment> carried;
        int round = 0;

        // pending retransmissions first, splitting the last one if it does not fit
        for (std::size_t i = 0; i < s.retx.size() && budget > 0;) {
            Segment& seg = s.retx[i];
            if (seg.ready > t) break;
            if (!s.live(seg.seq)) {
                s.retx.erase(s.retx.begin() + static_cast<std::ptrdiff_t>(i));
                continue;
            }
            const std::int64_t take = std::min(seg.bits, budget);
            carried.push_back({seg.ready, seg.seq, take, seg.round});
            round = std::max(round, seg.round);
            budget -= take;
            if (take == seg.bits) {
                s.retx.erase(s.retx.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                seg.bits -= take;
                ++i;
            }
        }
        while (budget > 0 && s.unsent_bits > 0) {
            PacketState& p = s.at(s.next_unsent);
            const std::int64_t take = std::min(p.unsent, budget);
            carried.push_back({t, s.next_unsent, take, 0});
            p.unsent -= take;
            s.unsent_bits -= take;
            budget -= take;
            if (p.unsent == 0) advance_unsent(s);
        }
        if (carried.empty()) return;

        const int slots_ahead = cfg_.pipeline.mac_to_phy_slots + 1;
        const SimTime decoded = t + slot * static_cast<std::int64_t>(slots_ahead) + cfg_.pipeline.tb_decode;
        TbContext ctx{static_cast<std::uint32_t>(d), t, s.sinr, round, cfg_.bler.bler(s.sinr, s.sinr)};
        const bool failed = error_model_ ? error_model_(ctx, rng_) : rng_.bernoulli(ctx.bler);
        ++result_.stats.transport_blocks;

        if (failed) {
            ++result_.stats.tb_failures;
            const SimTime ready = decoded + slot * static_cast<std::int64_t>(cfg_.pipeline.harq_feedback_slots);
            for (const Segment& seg : carried) {
                if (!s.live(seg.seq)) continue;
                if (seg.round + 1 > cfg_.pipeline.max_harq_retx) {
                    drop(d, seg.seq, DropReason::kHarqExhausted);
                    continue;
                }
                Segment next{ready, seg.seq, seg.bits, seg.round + 1};
                auto pos = std::upper_bound(s.retx.begin(), s.retx.end(), next,
                                            [](const Segment& a, const Segment& b) { return a.ready < b.ready; });
                s.retx.insert(pos, next);
            }
        } else {
            for (const Segment& seg : carried) {
                if (!s.live(seg.seq)) continue;
                PacketState& p = s.at(seg.seq);
                p.outstanding -= seg.bits;
                p.last_rx = std::max(p.last_rx, decoded);
                if (p.outstanding == 0) finish(d, seg.seq, p.last_rx, DropReason::kNone);
            }
        }
        pop_done(s);
    }

    void advance_unsent(DeviceState& s) {
        while (s.next_unsent < s.base_seq + s.packets.size() && s.at(s.next_unsent).unsent == 0) ++s.next_unsent;
    }

    void drop(std::size_t d, std::uint64_t seq, DropReason reason) {
        DeviceState& s = state_[d];
        PacketState& p = s.at(seq);
        s.unsent_bits -= p.unsent;
        p.unsent = 0;
        if (seq == s.next_unsent) advance_unsent(s);
        if (reason == DropReason::kHarqExhausted) ++result_.stats.harq_drops;
        if (reason == DropReason::kHorizon) ++result_.stats.horizon_drops;
        finish(d, seq, SimTime{}, reason);
    }

    void finish(std::size_t d, std::uint64_t seq, SimTime delivered, DropReason reason) {
        PacketState& p = state_[d].at(seq);
        p.done = true;
        PacketRecord r;
        r.profile = cfg_.profile;
        r.device = static_cast<std::uint32_t>(d);
        r.size_bytes = p.bytes;
        r.created = p.created;
        if (reason == DropReason::kNone) r.delivered = delivered;
        r.drop_reason = reason;
        r.interval = p.interval;
        const std::size_t i = p.interval - 1U;
        result_.throughput[i][d].add(r);
        result_.reliability[i].add(r);
        if (cfg_.keep_records) result_.records.push_back(r);
    }

    static void pop_done(DeviceState& s) {
        while (!s.packets.empty() && s.packets.front().done) {
            s.packets.pop_front();
            ++s.base_seq;
        }
        if (s.next_unsent < s.base_seq) s.next_unsent = s.base_seq;
    }

    /// Next slot with work: `candidate` if anything is ready by then, else the
    /// slot boundary at or after the next arrival or retransmission.
    SimTime next_time(SimTime candidate) {
        std::optional<SimTime> wake = stream_.peek_time();
        for (const DeviceState& s : state_) {
            if (s.unsent_bits > 0) return candidate;
            for (const Segment& seg : s.retx) {
                if (!s.live(seg.seq)) continue;
                if (!wake || seg.ready < *wake) wake = seg.ready;
                break;
            }
        }
        if (!wake) return cfg_.horizon();
        return *wake <= candidate ? candidate : align(*wake);
    }

    void drain(SimTime horizon) {
        while (auto a = stream_.pop_until(SimTime{std::numeric_limits<std::int64_t>::max()})) {
            if (a->t < horizon) enqueue(*a);
        }
        for (std::size_t d = 0; d < state_.size(); ++d) {
            DeviceState& s = state_[d];
            for (std::uint64_t seq = s.base_seq; seq < s.base_seq + s.packets.size(); ++seq)
                if (!s.at(seq).done) drop(d, seq, DropReason::kHorizon);
            pop_done(s);
        }
    }

    const SliceRunConfig& cfg_;
    std::span<const Device> devices_;
    ArrivalStream stream_;
    Rng rng_;
    const TbErrorModel& error_model_;
    std::vector<DeviceState> state_;
    RoundRobinScheduler scheduler_;
    SliceRunResult result_;
};

}  // namespace

SliceRunResult simulate_slice(const SliceRunConfig& config, std::span<const Device> devices,
                              const TrafficPlan& traffic, std::uint64_t harq_seed, const TbErrorModel& error_model) {
    if (config.per_interval.empty()) throw std::invalid_argument("slice run needs at least one interval");
    return Engine(config, devices, traffic, harq_seed, error_model).run();
}

}  // namespace nrslice
