#include <gtest/gtest.h>

#include <cmath>

#include "nrslice/channel.hpp"

using namespace nrslice;

namespace {
const Position3D kOrigin{0, 0, 0};
Position3D at_distance(double d) { return {d, 0, 0}; }
}  // namespace

TEST(Pathloss, LosOneMetre) {
    EXPECT_NEAR(pathloss_db(kOrigin, at_distance(1.0), 3.7, {true, 0.0}), 42.6358, 1e-3);
}

TEST(Pathloss, LosTenMetres) {
    EXPECT_NEAR(pathloss_db(kOrigin, at_distance(10.0), 3.7, {true, 0.0}), 64.1358, 1e-3);
}

TEST(Pathloss, NlosNeverBelowLos) {
    for (double d = 1.0; d <= 600.0; d *= 1.3) {
        const double los = pathloss_db(kOrigin, at_distance(d), 3.7, {true, 0.0});
        const double nlos = pathloss_db(kOrigin, at_distance(d), 3.7, {false, 0.0});
        EXPECT_GE(nlos, los) << d;
    }
}

TEST(Pathloss, NlosDenseHighFormula) {
    // 33.63 + 21.9 log10(20) + 20 log10(3.7)
    EXPECT_NEAR(pathloss_db(kOrigin, at_distance(20.0), 3.7, {false, 0.0}), 73.4866, 1e-3);
}

TEST(Pathloss, ShadowingAdds) {
    const double base = pathloss_db(kOrigin, at_distance(15.0), 3.7, {true, 0.0});
    EXPECT_NEAR(pathloss_db(kOrigin, at_distance(15.0), 3.7, {true, 3.5}), base + 3.5, 1e-12);
}

TEST(Pathloss, MonotoneInDistance) {
    for (bool los : {true, false}) {
        double prev = 0.0;
        for (double d = 1.0; d <= 600.0; d += 0.75) {
            const double pl = pathloss_db(kOrigin, at_distance(d), 3.7, {los, 0.0});
            EXPECT_GE(pl, prev);
            prev = pl;
        }
    }
}

TEST(Pathloss, ClampsBelowOneMetre) {
    std::size_t clamped = 0;
    const double pl = pathloss_db(kOrigin, at_distance(0.2), 3.7, {true, 0.0}, &clamped);
    EXPECT_EQ(clamped, 1u);
    EXPECT_NEAR(pl, 42.6358, 1e-3);
}

TEST(Pathloss, RejectsOutsideValidity) {
    EXPECT_THROW(pathloss_db(kOrigin, at_distance(601.0), 3.7, {true, 0.0}), std::out_of_range);
    EXPECT_THROW(pathloss_db(kOrigin, at_distance(10.0), 0.4, {true, 0.0}), std::out_of_range);
    EXPECT_THROW(pathloss_db(kOrigin, at_distance(10.0), 101.0, {true, 0.0}), std::out_of_range);
}

TEST(LosProbability, Examples) {
    EXPECT_DOUBLE_EQ(los_probability(0.0), 1.0);
    EXPECT_NEAR(los_probability(25.0, 25.0), 0.3679, 1e-4);
    EXPECT_LT(los_probability(1e4), 1e-100);
}

TEST(LosProbability, NonIncreasing) {
    double prev = 1.0;
    for (double d = 0.0; d < 200.0; d += 0.5) {
        EXPECT_LE(los_probability(d), prev);
        prev = los_probability(d);
    }
}

TEST(LinkBudget, NoiseAndSinrExample) {
    EXPECT_NEAR(noise_dbm(18e6, 7.0), -94.447, 1e-3);
    EXPECT_NEAR(sinr_db(15.0, 80.0, 18e6, 7.0), 29.447, 1e-3);
}

TEST(LinkBudget, HalvingBandwidthGains3dB) {
    EXPECT_NEAR(sinr_db(15.0, 70.0, 10e6, 7.0) - sinr_db(15.0, 70.0, 20e6, 7.0), 3.0103, 1e-4);
}

TEST(LinkBudget, SinrFallsWithPathloss) {
    EXPECT_LT(sinr_db(15.0, 300.0, 18e6, 7.0), -150.0);
}

TEST(SpectralEfficiency, Examples) {
    EXPECT_EQ(spectral_efficiency(-20.0), 0.0);
    EXPECT_DOUBLE_EQ(spectral_efficiency(0.0), 0.75);
    EXPECT_DOUBLE_EQ(spectral_efficiency(40.0), 7.4063);
}

TEST(SpectralEfficiency, MonotoneAndBounded) {
    double prev = 0.0;
    for (double s = -30.0; s <= 60.0; s += 0.1) {
        const double se = spectral_efficiency(s);
        EXPECT_GE(se, prev);
        EXPECT_GE(se, 0.0);
        EXPECT_LE(se, 7.4063);
        prev = se;
    }
}

TEST(SpectralEfficiency, ScalesWithAlpha) {
    ChannelParams p;
    p.se_alpha = 0.3;
    EXPECT_DOUBLE_EQ(spectral_efficiency(0.0, p), 0.3);
}

TEST(ChannelDrawTest, SameSeedSameDraws) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const ChannelDraw x = draw_channel(a), y = draw_channel(b);
        EXPECT_EQ(x.los_uniform, y.los_uniform);
        EXPECT_EQ(x.shadowing_std_normal, y.shadowing_std_normal);
    }
}

TEST(ChannelDrawTest, StateUsesLosProbabilityAndSigma) {
    const ChannelParams p;
    const ChannelDraw d{0.30, 1.0};
    // exp(-10/25) = 0.67 > 0.30 -> LOS; exp(-40/25) = 0.20 < 0.30 -> NLOS
    EXPECT_TRUE(d.state_at(10.0, p).los);
    EXPECT_DOUBLE_EQ(d.state_at(10.0, p).shadowing_db, 4.3);
    EXPECT_FALSE(d.state_at(40.0, p).los);
    EXPECT_DOUBLE_EQ(d.state_at(40.0, p).shadowing_db, 4.0);
}

TEST(ChannelDrawTest, LosFrequencyMatchesProbability) {
    Rng rng(7);
    const ChannelParams p;
    int los = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) los += draw_channel(rng).state_at(25.0, p).los;
    EXPECT_NEAR(static_cast<double>(los) / n, std::exp(-1.0), 0.01);
}
