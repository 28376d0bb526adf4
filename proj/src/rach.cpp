#include "nrslice/rach.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "nrslice/error.hpp"
#include "nrslice/rng.hpp"
#include "nrslice/stats.hpp"

namespace nrslice {

void RaSlotPattern::validate() const {
    if (period_frames < 1 || period_frames > 2) throw ConfigError("period must be 1 or 2 frames", "rach.pattern");
    if (subframes.empty()) throw ConfigError("no subframe offsets", "rach.pattern");
    for (std::size_t i = 0; i < subframes.size(); ++i) {
        if (subframes[i] < 0 || subframes[i] > 9) throw ConfigError("subframe offset outside 0-9", "rach.pattern");
        if (i > 0 && subframes[i] <= subframes[i - 1]) {
            throw ConfigError("subframe offsets must be strictly increasing", "rach.pattern");
        }
    }
}

const PatternTable& builtin_patterns() {
    static const PatternTable table = {
        {16, {1, {1}}},
        {19, {1, {1, 6}}},
        {22, {1, {1, 4, 7}}},
    };
    return table;
}

RaSlotPattern pattern_for_index(int index, const PatternTable& overrides) {
    if (auto it = overrides.find(index); it != overrides.end()) return it->second;
    const auto& table = builtin_patterns();
    if (auto it = table.find(index); it != table.end()) return it->second;
    std::string known;
    for (const auto* t : {&overrides, &table}) {
        for (const auto& [k, _] : *t) known += (known.empty() ? "" : ", ") + std::to_string(k);
    }
    throw ConfigError("unknown PRACH configuration index " + std::to_string(index) + " (supported: " + known + ")",
                      "rach.prach_config_index");
}

SimTime next_ra_slot(const RaSlotPattern& pattern, SimTime t) {
    const std::int64_t period = kFrameDuration.ns * pattern.period_frames;
    const std::int64_t t_ns = std::max<std::int64_t>(t.ns, 0);
    std::int64_t base = (t_ns / period) * period;
    for (;;) {
        for (int sf : pattern.subframes) {
            const std::int64_t s = base + sf * kSubframeDuration.ns;
            if (s >= t_ns) return {s};
        }
        base += period;
    }
}

std::vector<SimTime> ra_slot_schedule(const RaSlotPattern& pattern, SimTime horizon) {
    if (horizon.ns <= 0) throw std::invalid_argument("horizon must be positive");
    std::vector<SimTime> out;
    for (SimTime s = next_ra_slot(pattern, {0}); s < horizon; s = next_ra_slot(pattern, s + SimTime{1})) {
        out.push_back(s);
    }
    return out;
}

std::string_view to_string(CollisionFeedback f) {
    return f == CollisionFeedback::kRarReception ? "rar_reception" : "rar_window_expiry";
}

CollisionFeedback collision_feedback_from_string(std::string_view s) {
    if (s == "rar_reception") return CollisionFeedback::kRarReception;
    if (s == "rar_window_expiry") return CollisionFeedback::kRarWindowExpiry;
    throw ConfigError("unknown collision feedback '" + std::string(s) + "'", "rach.collision_feedback");
}

RachConfig RachConfig::for_index(int index, const PatternTable& overrides) {
    RachConfig c;
    c.prach_config_index = index;
    c.pattern = pattern_for_index(index, overrides);
    return c;
}

void RachConfig::validate() const {
    pattern.validate();
    if (num_preambles < 1 || num_preambles > 64) throw ConfigError("must be in [1, 64]", "rach.num_preambles");
    if (preamble_trans_max < 1) throw ConfigError("must be at least 1", "rach.preamble_trans_max");
    if (rar_window.ns <= 0 || rar_window > SimTime::from_ms(std::int64_t{10})) {
        throw ConfigError("must be in (0, 10] ms", "rach.rar_window_ms");
    }
    if (backoff_indicator.ns < 0) throw ConfigError("must be non-negative", "rach.backoff_indicator_ms");
    if (rar_processing_delay.ns < 0 || rar_processing_delay > rar_window) {
        throw ConfigError("RAR processing delay exceeds the RAR window", "rach.rar_processing_delay_ms");
    }
}

RaResults simulate_rach(std::span<const SimTime> arrivals, const RachConfig& config, std::uint64_t seed) {
    if (arrivals.empty()) throw std::invalid_argument("simulate_rach needs at least one arrival");
    config.validate();

    Rng rng(seed);
    RaResults res;
    res.ues.resize(arrivals.size());
    std::vector<SimTime> eligible(arrivals.size());
    std::vector<std::uint32_t> pending(arrivals.size());
    for (std::uint32_t i = 0; i < arrivals.size(); ++i) {
        res.ues[i].id = i;
        res.ues[i].arrival = arrivals[i];
        eligible[i] = arrivals[i];
        pending[i] = i;
    }

    const SimTime feedback_delay = config.collision_feedback == CollisionFeedback::kRarReception
                                       ? config.rar_processing_delay
                                       : config.rar_window;
    const auto backoff_ns = static_cast<double>(config.backoff_indicator.ns);

    std::vector<int> preamble_users(static_cast<std::size_t>(config.num_preambles));
    std::vector<std::uint32_t> active;
    std::vector<int> chosen;

    while (!pending.empty()) {
        SimTime earliest = eligible[pending.front()];
        for (auto i : pending) earliest = std::min(earliest, eligible[i]);
        const SimTime slot = next_ra_slot(config.pattern, earliest);
        ++res.ra_slots_used;

        active.clear();
        for (auto i : pending) {
            if (eligible[i] <= slot) active.push_back(i);
        }
        chosen.resize(active.size());
        std::fill(preamble_users.begin(), preamble_users.end(), 0);
        for (std::size_t k = 0; k < active.size(); ++k) {
            UeRaState& ue = res.ues[active[k]];
            if (ue.attempts == 0) ue.first_tx_time = slot;
            ++ue.attempts;
            chosen[k] = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(config.num_preambles)));
            ++preamble_users[static_cast<std::size_t>(chosen[k])];
        }
        for (std::size_t k = 0; k < active.size(); ++k) {
            UeRaState& ue = res.ues[active[k]];
            if (preamble_users[static_cast<std::size_t>(chosen[k])] == 1) {
                ue.state = RaState::kSucceeded;
                ue.success_time = slot + config.rar_processing_delay;
                ++res.succeeded;
            } else if (ue.attempts >= config.preamble_trans_max) {
                ue.state = RaState::kBlocked;
                ++res.blocked;
            } else {
                ue.state = RaState::kBackoff;
                const double b = rng.uniform01() * backoff_ns;
                eligible[active[k]] = slot + feedback_delay + SimTime{static_cast<std::int64_t>(b + 0.5)};
            }
        }
        std::erase_if(pending, [&](std::uint32_t i) {
            const RaState s = res.ues[i].state;
            return s == RaState::kSucceeded || s == RaState::kBlocked;
        });
    }
    return res;
}

RaResults simulate_rach(std::size_t n_arrivals, const RachConfig& config, std::uint64_t seed) {
    const std::vector<SimTime> arrivals(n_arrivals, SimTime{0});
    return simulate_rach(arrivals, config, seed);
}

SimTime access_delay(const UeRaState& ue) {
    if (ue.state != RaState::kSucceeded || !ue.success_time) {
        throw std::logic_error("access delay requested for a UE that did not succeed");
    }
    return *ue.success_time - ue.first_tx_time;
}

RachMetrics rach_metrics(const RaResults& results) {
    if (results.ues.empty()) throw std::invalid_argument("rach_metrics on empty results");
    RachMetrics m;
    m.total = results.ues.size();
    m.succeeded = results.succeeded;
    m.blocking_probability = results.blocking_probability();
    std::vector<double> delays;
    delays.reserve(results.succeeded);
    double retx = 0.0;
    for (const auto& ue : results.ues) {
        if (ue.state != RaState::kSucceeded) continue;
        retx += ue.attempts - 1;
        delays.push_back(access_delay(ue).ms());
    }
    if (!delays.empty()) {
        m.avg_preamble_retx = retx / static_cast<double>(delays.size());
        const Spread s = spread_of(delays);
        m.delay_mean_ms = s.mean;
        m.delay_dev_lo_ms = s.dev_lo;
        m.delay_dev_hi_ms = s.dev_hi;
    }
    return m;
}

}  // namespace nrslice
