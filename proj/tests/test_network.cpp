#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "harness.hpp"
#include "wormnav/errors.hpp"
#include "wormnav/network.hpp"

using namespace wormnav;

namespace {

constexpr double kDt = 1e-3;

struct Trace {
    std::vector<std::array<bool, 7>> spikes;
    std::vector<MotionCommand> commands;
};

template <class Profile>
Trace run(const NetworkConfig& cfg, double c0, double seconds, Profile profile) {
    NetworkState s = NetworkState::initial(cfg, c0, kDt);
    Trace out;
    const long steps = std::lround(seconds / kDt);
    for (long k = 0; k < steps; ++k) {
        const double c = profile(static_cast<double>(k) * kDt);
        out.commands.push_back(network_advance(s, cfg, c, kDt));
        out.spikes.push_back(s.spikes);
    }
    return out;
}

int count(const Trace& t, Neuron n) {
    int c = 0;
    for (const auto& s : t.spikes) c += s[n];
    return c;
}

double first_spike(const Trace& t, Neuron n) {
    for (std::size_t k = 0; k < t.spikes.size(); ++k)
        if (t.spikes[k][n]) return static_cast<double>(k + 1) * kDt;
    return -1.0;
}

} // namespace

TEST(Comparator, StrictInequalities) {
    EXPECT_EQ(comparator_current(55.0, 55.0, Comparator::upper, 2.0), 0.0);
    EXPECT_EQ(comparator_current(55.0, 55.0, Comparator::lower, 2.0), 0.0);
    EXPECT_EQ(comparator_current(55.0, 56.0, Comparator::upper, 2.0), 2.0);
    EXPECT_EQ(comparator_current(55.0, 56.0, Comparator::lower, 2.0), 0.0);
    EXPECT_EQ(comparator_current(55.0, 54.0, Comparator::lower, 2.0), 2.0);
    EXPECT_EQ(comparator_current(55.0, 54.0, Comparator::upper, 2.0), 0.0);
}

TEST(Comparator, DriveGivesTenHertz) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    EXPECT_NEAR(lif_analytic_period(cfg.comparator_lif, cfg.comparator_drive()), 0.1, 1e-9);
    const Trace t = run(cfg, 60.0, 10.0, [](double) { return 60.0; });
    EXPECT_NEAR(count(t, N1), 100, 2);
    EXPECT_EQ(count(t, N2), 0);
}

TEST(Network, FlatAtSetPointIsSilent) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const Trace t = run(cfg, 55.0, 20.0, [](double) { return 55.0; });
    for (Neuron n : {N1, N2, N3, N4, N5, N6, N7}) EXPECT_EQ(count(t, n), 0) << "neuron " << n;
    for (const auto& c : t.commands) ASSERT_EQ(c.turn, Turn::none);
}

TEST(Network, FlatBelowSetPointExplores) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const Trace t = run(cfg, 40.0, 20.0, [](double) { return 40.0; });
    EXPECT_GT(count(t, N2), 0);
    EXPECT_EQ(count(t, N3) + count(t, N4) + count(t, N5) + count(t, N6), 0);
    ASSERT_GT(count(t, N7), 0);
    EXPECT_LE(first_spike(t, N7) - first_spike(t, N2), 2.0);
    for (std::size_t k = 0; k < t.commands.size(); ++k)
        if (t.spikes[k][N7]) EXPECT_EQ(t.commands[k], (MotionCommand{Turn::random_uniform, SpeedMode::explore}));
}

TEST(Network, RisingAboveSetPointTurnsClockwise) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const Trace t = run(cfg, 56.0, 20.0, [](double s) { return 56.0 + 1.0 * s; });
    const double both = std::max(first_spike(t, N1), first_spike(t, N3));
    ASSERT_GT(first_spike(t, N3), 0.0);
    const double n5 = first_spike(t, N5);
    ASSERT_GT(n5, 0.0);
    // Paired streams fire the detector within three comparator-kernel time constants.
    EXPECT_LE(n5 - both, 3.0 * cfg.comparator_kernel.tau_slow * 1e-3);
    EXPECT_EQ(count(t, N6), 0);
    bool cw = false;
    for (std::size_t k = 0; k < t.commands.size(); ++k)
        if (t.spikes[k][N5]) {
            EXPECT_EQ(t.commands[k], (MotionCommand{Turn::cw_fixed, SpeedMode::track}));
            cw = true;
        }
    EXPECT_TRUE(cw);
}

TEST(Network, FallingBelowSetPointTurnsCounterClockwise) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const Trace t = run(cfg, 54.0, 20.0, [](double s) { return 54.0 - 1.0 * s; });
    EXPECT_GT(count(t, N6), 0);
    EXPECT_EQ(count(t, N5), 0);
}

TEST(Network, SpeedHeldFromLastDecision) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const Trace t = run(cfg, 56.0, 20.0, [](double s) { return 56.0 + 1.0 * s; });
    SpeedMode expected = SpeedMode::explore;
    for (std::size_t k = 0; k < t.commands.size(); ++k) {
        const auto& s = t.spikes[k];
        if (s[N5] || s[N6]) expected = SpeedMode::track;
        else if (s[N7]) expected = SpeedMode::explore;
        ASSERT_EQ(t.commands[k].speed, expected) << "step " << k;
    }
}

TEST(Network, CoincidenceDetectorsNeverFireTogether) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> slope(-3.0, 3.0);
    double c = 55.0, m = 0.0;
    const Trace t = run(cfg, 55.0, 120.0, [&](double s) {
        if (std::fmod(s, 2.0) < kDt / 2) m = slope(rng);
        c = std::clamp(c + m * kDt, 30.0, 80.0);
        return c;
    });
    for (const auto& s : t.spikes) ASSERT_FALSE(s[N5] && s[N6]);
    EXPECT_GT(count(t, N5), 0);
    EXPECT_GT(count(t, N6), 0);
}

TEST(Network, DecodeIsDeterministic) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const auto profile = [](double s) { return 50.0 + 8.0 * std::sin(0.3 * s); };
    const Trace a = run(cfg, 50.0, 60.0, profile);
    const Trace b = run(cfg, 50.0, 60.0, profile);
    EXPECT_EQ(a.commands, b.commands);
    EXPECT_EQ(a.spikes, b.spikes);
}

TEST(Network, ObstacleHaltIsTerminal) {
    const NetworkConfig cfg = NetworkConfig::obstacle_defaults();
    const Trace t = run(cfg, 40.0, 20.0, [](double s) { return s < 5.0 ? 40.0 : (s < 10.0 ? 15.0 : 40.0); });
    const double halt_at = first_spike(t, N2);
    ASSERT_GT(halt_at, 5.0);
    bool halted = false;
    for (std::size_t k = 0; k < t.commands.size(); ++k) {
        if (t.spikes[k][N2]) halted = true;
        if (halted) ASSERT_EQ(t.commands[k], (MotionCommand{Turn::halt, SpeedMode::zero}));
        else ASSERT_NE(t.commands[k].turn, Turn::halt);
    }
    EXPECT_EQ(count(t, N6), 0);
}

TEST(Network, ObstacleTurnsAwayWhenClosing) {
    const NetworkConfig cfg = NetworkConfig::obstacle_defaults();
    const Trace t = run(cfg, 66.0, 20.0, [](double s) { return 66.0 + 1.0 * s; });
    EXPECT_GT(count(t, N5), 0);
    EXPECT_EQ(count(t, N6), 0);
}

TEST(Network, HaltNeverInTrackingMode) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const Trace t = run(cfg, 40.0, 20.0, [](double s) { return s < 10.0 ? 10.0 : 40.0; });
    for (const auto& c : t.commands) ASSERT_NE(c.turn, Turn::halt);
}

TEST(Calibration, CalibratedBiasSeparatesSingleFromPaired) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const auto o = probe_coincidence(cfg.coincidence_lif, cfg.comparator_kernel, cfg.detector_kernel, 1.0, 1.0,
                                     cfg.bias5, {});
    EXPECT_EQ(o.single_comparator_spikes, 0);
    EXPECT_EQ(o.single_detector_spikes, 0);
    EXPECT_EQ(o.dual_empty_windows, 0);
    EXPECT_LT(cfg.bias5, 0.0);
}

TEST(Calibration, ZeroBiasLetsSingleInputThrough) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    // Nominal single streams stay subthreshold even unbiased; stronger ones
    // fire the unbiased neuron, which is what the negative bias guards against.
    CoincidenceProbe strong;
    strong.comparator_rate = 20.0;
    strong.detector_max_rate = 100.0;
    const auto unbiased =
        probe_coincidence(cfg.coincidence_lif, cfg.comparator_kernel, cfg.detector_kernel, 1.0, 1.0, 0.0, strong);
    EXPECT_GT(unbiased.single_comparator_spikes, 0);
    EXPECT_GT(unbiased.single_detector_spikes, 0);
}

TEST(Calibration, InfeasibleWeightsThrow) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    EXPECT_THROW(calibrate_coincidence_bias(cfg.coincidence_lif, cfg.comparator_kernel, cfg.detector_kernel, 0.0, 0.0),
                 calibration_error);
}

TEST(Property, AndGateOverRandomEpisodes) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const auto tally = harness::coincidence_episodes(cfg, 150, 99);
    EXPECT_EQ(tally.false_positives, 0);
    EXPECT_GE(tally.detections, 0.99 * tally.dual_trials);
}

TEST(Property, ExplorerGate) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const double gate = harness::explorer_gate_rate(cfg);
    EXPECT_LT(gate, 100.0);
    const auto tally = harness::explorer_episodes(cfg, 100, 17, gate);
    EXPECT_EQ(tally.free_late, 0);
    EXPECT_EQ(tally.gated_spiking, 0);
}

TEST(NetworkConfig, Validation) {
    NetworkConfig c = NetworkConfig::tracking_defaults();
    EXPECT_NO_THROW(c.validate());
    c.bias7 = 0.5;
    EXPECT_THROW(c.validate(), config_error);
    c = NetworkConfig::tracking_defaults();
    c.weights.w37 = 0.2;
    EXPECT_THROW(c.validate(), config_error);
    c = NetworkConfig::obstacle_defaults();
    EXPECT_NO_THROW(c.validate());
    c.weights.w27 = -0.5;
    EXPECT_THROW(c.validate(), config_error);
    try {
        NetworkConfig bad = NetworkConfig::tracking_defaults();
        bad.weights.w15 = -1.0;
        bad.validate();
        FAIL();
    } catch (const config_error& e) {
        EXPECT_EQ(e.field(), "network.weights.w15");
    }
}
