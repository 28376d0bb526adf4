#pragma once

#include <cstddef>

#include "nrslice/rng.hpp"

namespace nrslice {

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    friend constexpr bool operator==(const Position3D&, const Position3D&) = default;
};

double distance_2d(const Position3D& a, const Position3D& b);
double distance_3d(const Position3D& a, const Position3D& b);

struct LinkState {
    bool los = false;
    double shadowing_db = 0.0;
};

/// Large-scale channel and link-adaptation parameters. Defaults are the InF-DH
/// rows of TR 38.901 plus conventional receiver figures.
struct ChannelParams {
    double frequency_ghz = 3.7;
    double k_dh_m = 25.0;            // LOS-probability clutter distance
    double sigma_los_db = 4.3;
    double sigma_nlos_db = 4.0;
    double noise_figure_dl_db = 7.0; // UE receiver
    double noise_figure_ul_db = 5.0; // gNB receiver
    double gnb_tx_power_dbm = 15.0;
    double ue_tx_power_dbm = 15.0;
    double se_alpha = 0.75;
    double se_max = 7.4063;
    double sinr_min_db = -10.0;

    friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

/// InF LOS / InF-DH NLOS path loss in dB, shadowing included.
/// Distances below 1 m are clamped to 1 m and counted in `clamped` when given.
/// Throws std::out_of_range beyond 600 m or outside 0.5-100 GHz.
double pathloss_db(const Position3D& tx, const Position3D& rx, double freq_ghz, const LinkState& state,
                   std::size_t* clamped = nullptr);

/// exp(-d2d / k).
double los_probability(double d2d_m, double k_m = 25.0);

double noise_dbm(double bandwidth_hz, double noise_figure_db);

/// Single-cell link budget: no interference term.
double sinr_db(double tx_power_dbm, double pathloss_db, double bandwidth_hz, double noise_figure_db);

/// Truncated-Shannon link adaptation: min(alpha * log2(1 + sinr), se_max), zero below sinr_min.
double spectral_efficiency(double sinr_db, const ChannelParams& params = {});

/// Quasi-static per (device, interval) channel draw. The LOS uniform is kept so
/// LOS can be re-evaluated as the device moves while staying a fixed draw.
struct ChannelDraw {
    double los_uniform = 1.0;
    double shadowing_std_normal = 0.0;

    LinkState state_at(double d2d_m, const ChannelParams& params) const;
};

ChannelDraw draw_channel(Rng& rng);

}  // namespace nrslice
