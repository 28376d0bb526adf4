#include "nrslice/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nrslice {

double distance_2d(const Position3D& a, const Position3D& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_3d(const Position3D& a, const Position3D& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

double pathloss_db(const Position3D& tx, const Position3D& rx, double freq_ghz, const LinkState& state,
                   std::size_t* clamped) {
    if (freq_ghz < 0.5 || freq_ghz > 100.0) throw std::out_of_range("frequency outside 0.5-100 GHz");
    double d = distance_3d(tx, rx);
    if (d > 600.0) throw std::out_of_range("3D distance beyond 600 m");
    if (d < 1.0) {
        d = 1.0;
        if (clamped) ++*clamped;
    }
    const double log_d = std::log10(d);
    const double log_f = std::log10(freq_ghz);
    const double los = 31.84 + 21.50 * log_d + 19.00 * log_f;
    if (state.los) return los + state.shadowing_db;
    const double nlos_dh = 33.63 + 21.9 * log_d + 20.0 * log_f;
    return std::max(los, nlos_dh) + state.shadowing_db;
}

double los_probability(double d2d_m, double k_m) { return std::exp(-d2d_m / k_m); }

double noise_dbm(double bandwidth_hz, double noise_figure_db) {
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double sinr_db(double tx_power_dbm, double pl_db, double bandwidth_hz, double noise_figure_db) {
    return tx_power_dbm - pl_db - noise_dbm(bandwidth_hz, noise_figure_db);
}

double spectral_efficiency(double sinr, const ChannelParams& params) {
    if (sinr < params.sinr_min_db) return 0.0;
    const double linear = std::pow(10.0, sinr / 10.0);
    return std::min(params.se_alpha * std::log2(1.0 + linear), params.se_max);
}

LinkState ChannelDraw::state_at(double d2d_m, const ChannelParams& params) const {
    const bool los = los_uniform < los_probability(d2d_m, params.k_dh_m);
    const double sigma = los ? params.sigma_los_db : params.sigma_nlos_db;
    return {los, sigma * shadowing_std_normal};
}

ChannelDraw draw_channel(Rng& rng) {
    ChannelDraw d;
    d.los_uniform = rng.uniform01();
    d.shadowing_std_normal = rng.normal();
    return d;
}

}  // namespace nrslice
