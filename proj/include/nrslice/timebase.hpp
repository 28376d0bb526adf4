#pragma once

#include <compare>
#include <cstdint>

namespace nrslice {

/// Simulation clock with integer nanosecond resolution. Also used for durations.
struct SimTime {
    std::int64_t ns = 0;

    static constexpr SimTime from_ns(std::int64_t v) { return {v}; }
    static constexpr SimTime from_us(std::int64_t v) { return {v * 1'000}; }
    static constexpr SimTime from_ms(std::int64_t v) { return {v * 1'000'000}; }
    static constexpr SimTime from_s(std::int64_t v) { return {v * 1'000'000'000}; }
    /// Rounds to the nearest nanosecond.
    static SimTime from_ms(double v);
    static SimTime from_s(double v);

    constexpr double ms() const { return static_cast<double>(ns) * 1e-6; }
    constexpr double seconds() const { return static_cast<double>(ns) * 1e-9; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;
    friend constexpr SimTime operator+(SimTime a, SimTime b) { return {a.ns + b.ns}; }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return {a.ns - b.ns}; }
    friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return {a.ns * k}; }
    friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return {a.ns * k}; }
    constexpr SimTime& operator+=(SimTime o) { ns += o.ns; return *this; }
    constexpr SimTime& operator-=(SimTime o) { ns -= o.ns; return *this; }
};

inline constexpr SimTime kFrameDuration = SimTime::from_ms(std::int64_t{10});
inline constexpr SimTime kSubframeDuration = SimTime::from_ms(std::int64_t{1});
inline constexpr int kSymbolsPerSlot = 14;
inline constexpr int kSubcarriersPerPrb = 12;

/// NR numerology index mu in [0, 4].
class Numerology {
public:
    /// Throws ConfigError when mu is outside [0, 4].
    explicit Numerology(int mu);

    constexpr int mu() const { return mu_; }
    friend constexpr bool operator==(Numerology, Numerology) = default;

private:
    int mu_;
};

struct NumerologyParams {
    int scs_khz;
    SimTime slot_duration;
    SimTime symbol_duration;  // 1/14 of a slot, rounded to the nearest ns
    int slots_per_subframe;
};

NumerologyParams numerology_params(Numerology mu);

inline SimTime slot_duration(Numerology mu) { return SimTime::from_ns(1'000'000 >> mu.mu()); }
inline int slots_per_subframe(Numerology mu) { return 1 << mu.mu(); }
inline double scs_hz(Numerology mu) { return 15e3 * static_cast<double>(1 << mu.mu()); }

/// Number of whole PRBs (12 subcarriers) that fit into the usable part of
/// `bandwidth_hz`. Throws ConfigError on bad arguments; a zero result is
/// returned as-is and callers decide whether that is fatal.
int prb_count(double bandwidth_hz, Numerology mu, double guard_fraction = 0.10);

struct FramePosition {
    std::int64_t frame = 0;
    int subframe = 0;
    int slot = 0;
    friend constexpr bool operator==(const FramePosition&, const FramePosition&) = default;
};

FramePosition time_to_position(SimTime t, Numerology mu);
SimTime position_to_time(const FramePosition& pos, Numerology mu);

/// First slot boundary of numerology `mu` at or after `t`.
SimTime next_slot_boundary(SimTime t, Numerology mu);

}  // namespace nrslice
