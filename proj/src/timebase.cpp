#include "nrslice/timebase.hpp"

#include <cmath>

#include "nrslice/error.hpp"

namespace nrslice {

SimTime SimTime::from_ms(double v) { return {std::llround(v * 1e6)}; }
SimTime SimTime::from_s(double v) { return {std::llround(v * 1e9)}; }

Numerology::Numerology(int mu) : mu_(mu) {
    if (mu < 0 || mu > 4) {
        throw ConfigError("numerology " + std::to_string(mu) + " outside [0, 4]", "mu");
    }
}

NumerologyParams numerology_params(Numerology mu) {
    const int per_subframe = slots_per_subframe(mu);
    const double symbol_ns = 1e6 / (kSymbolsPerSlot * per_subframe);
    return {15 * per_subframe, slot_duration(mu), SimTime::from_ns(std::llround(symbol_ns)), per_subframe};
}

int prb_count(double bandwidth_hz, Numerology mu, double guard_fraction) {
    if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive", "bandwidth_hz");
    if (!(guard_fraction >= 0.0 && guard_fraction < 1.0)) {
        throw ConfigError("guard fraction must be in [0, 1)", "guard_fraction");
    }
    const double prb_hz = kSubcarriersPerPrb * scs_hz(mu);
    // the epsilon keeps exact ratios like 5.4 MHz / 180 kHz from landing at 29.999...
    return static_cast<int>(std::floor(bandwidth_hz * (1.0 - guard_fraction) / prb_hz + 1e-9));
}

FramePosition time_to_position(SimTime t, Numerology mu) {
    const std::int64_t frame = t.ns / kFrameDuration.ns;
    const std::int64_t in_frame = t.ns % kFrameDuration.ns;
    const auto subframe = static_cast<int>(in_frame / kSubframeDuration.ns);
    const auto slot = static_cast<int>((in_frame % kSubframeDuration.ns) / slot_duration(mu).ns);
    return {frame, subframe, slot};
}

SimTime position_to_time(const FramePosition& pos, Numerology mu) {
    return kFrameDuration * pos.frame + kSubframeDuration * pos.subframe + slot_duration(mu) * pos.slot;
}

SimTime next_slot_boundary(SimTime t, Numerology mu) {
    const std::int64_t slot = slot_duration(mu).ns;
    const std::int64_t q = (t.ns + slot - 1) / slot;
    return {q * slot};
}

}  // namespace nrslice
