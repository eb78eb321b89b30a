#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <numbers>
#include <type_traits>
#include <vector>

#include "wormnav/baselines.hpp"
#include "wormnav/errors.hpp"

using namespace wormnav;

namespace {

// Closed-form CDF of the truncated l^-2 density.
double levy_cdf(const LevyParams& p, double l) { return (1.0 / p.s_min - 1.0 / l) / (1.0 / p.s_min - 1.0 / p.s_max); }

} // namespace

TEST(Levy, InverseCdfEndpoints) {
    const LevyParams p;
    EXPECT_DOUBLE_EQ(levy_length_from_uniform(p, 0.0), p.s_min);
    EXPECT_NEAR(levy_length_from_uniform(p, 1.0 - 1e-12), p.s_max, 1e-6);
    for (double u : {0.1, 0.5, 0.9}) EXPECT_NEAR(levy_cdf(p, levy_length_from_uniform(p, u)), u, 1e-12);
}

TEST(Levy, AnalyticMean) {
    const LevyParams p;
    EXPECT_NEAR(p.mean_length(), 1.337, 1e-3);  // quoted to three decimals
    // Generic-exponent branch agrees with the alpha = 2 closed form in the limit.
    LevyParams q = p;
    q.exponent = 2.0 + 1e-7;
    EXPECT_NEAR(q.mean_length(), p.mean_length(), 1e-5);
}

TEST(Levy, EmpiricalMeanAndBounds) {
    const LevyParams p;
    Rng rng = make_rng(2024);
    const int n = 1000000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double l = levy_sample_length(p, rng);
        ASSERT_GE(l, p.s_min);
        ASSERT_LE(l, p.s_max);
        sum += l;
    }
    EXPECT_NEAR(sum / n, p.mean_length(), 0.01 * p.mean_length());
}

TEST(Levy, HistogramMatchesDensity) {
    const LevyParams p;
    Rng rng = make_rng(7);
    const int n = 1000000, bins = 50;
    const double lr = std::log(p.s_max / p.s_min);
    std::vector<int> counts(bins, 0);
    for (int k = 0; k < n; ++k) {
        const double l = levy_sample_length(p, rng);
        const int b = std::min(bins - 1, static_cast<int>(std::log(l / p.s_min) / lr * bins));
        ++counts[static_cast<std::size_t>(b)];
    }
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double lo = p.s_min * std::exp(lr * b / bins), hi = p.s_min * std::exp(lr * (b + 1) / bins);
        const double expected = n * (levy_cdf(p, hi) - levy_cdf(p, lo));
        chi2 += (counts[static_cast<std::size_t>(b)] - expected) * (counts[static_cast<std::size_t>(b)] - expected) /
                expected;
    }
    const boost::math::chi_squared dist(bins - 1);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01) << "chi2=" << chi2;
}

TEST(Levy, ModeBinContainsMinimum) {
    const LevyParams p;
    Rng rng = make_rng(8);
    const double width = (p.s_max - p.s_min) / 100.0;
    std::vector<int> counts(100, 0);
    for (int k = 0; k < 200000; ++k)
        ++counts[std::min<std::size_t>(99, static_cast<std::size_t>((levy_sample_length(p, rng) - p.s_min) / width))];
    EXPECT_EQ(std::max_element(counts.begin(), counts.end()) - counts.begin(), 0);
}

TEST(Levy, TurnHeadingsAreUniform) {
    LevyParams p;
    Rng rng = make_rng(3);
    const Bounds open{-1e9, -1e9, 1e9, 1e9};
    LevyWalker w = LevyWalker::start({0.0, 0.0}, p, rng);
    double cx = 0.0, cy = 0.0;
    long n = 0;
    while (n < 100000) {
        const long before = w.turns;
        levy_forager_step(w, p, rng, 1.0, open);
        if (w.turns != before) {
            cx += std::cos(w.agent.heading);
            cy += std::sin(w.agent.heading);
            ++n;
        }
    }
    EXPECT_LT(std::hypot(cx, cy) / static_cast<double>(n), 0.01);
}

TEST(Levy, StraightBetweenTurns) {
    LevyParams p;
    p.s_min = 30.0;
    p.s_max = 40.0;
    Rng rng = make_rng(4);
    const Bounds open{-1e9, -1e9, 1e9, 1e9};
    LevyWalker w = LevyWalker::start({0.0, 0.0}, p, rng);
    const double h0 = w.agent.heading;
    // 30 mm at 0.3 mm/s takes 100 s; no turn before then.
    for (int k = 0; k < 990; ++k) {
        levy_forager_step(w, p, rng, 0.1, open);
        ASSERT_EQ(w.turns, 0);
        ASSERT_EQ(w.agent.heading, h0);
    }
    const double d = std::hypot(w.agent.position.x, w.agent.position.y);
    EXPECT_NEAR(d, 99.0 * p.speed, 1e-9);
}

TEST(Levy, CoversDistanceAcrossTurns) {
    const LevyParams p;
    Rng rng = make_rng(5);
    const Bounds open{-1e9, -1e9, 1e9, 1e9};
    LevyWalker w = LevyWalker::start({0.0, 0.0}, p, rng);
    double path = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Vec2 before = w.agent.position;
        levy_forager_step(w, p, rng, 0.1, open);
        path += std::hypot(w.agent.position.x - before.x, w.agent.position.y - before.y);
    }
    // Chords across a turn can only shorten the path.
    EXPECT_LE(path, 1000 * 0.1 * p.speed + 1e-9);
    EXPECT_GT(w.turns, 0);
}

TEST(Levy, Validation) {
    LevyParams p;
    p.exponent = 1.0;
    EXPECT_THROW(p.validate(), config_error);
    p = LevyParams{};
    p.s_max = p.s_min;
    EXPECT_THROW(p.validate(), config_error);
}

TEST(Graded, SharesCommandAlphabet) {
    static_assert(std::is_same_v<decltype(graded_network_step(std::declval<GradedNetworkState>(),
                                                              std::declval<const NetworkConfig&>(),
                                                              std::declval<const GradedParams&>(), 0.0, 0.0)
                                              .second),
                                 decltype(network_step(std::declval<NetworkState>(),
                                                       std::declval<const NetworkConfig&>(), 0.0, 0.0)
                                              .second)>);
    SUCCEED();
}

TEST(Graded, FlatAtSetPointStaysAtBaseline) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const GradedParams gp;
    GradedNetworkState s = GradedNetworkState::initial(cfg, cfg.set_point);
    for (int k = 0; k < 20000; ++k) {
        const MotionCommand c = graded_network_advance(s, cfg, gp, cfg.set_point, 1e-3);
        ASSERT_EQ(c.turn, Turn::none);
    }
    EXPECT_NEAR(s.a5, logistic(gp.gain * gp.bias5), 1e-6);
    EXPECT_NEAR(s.a6, logistic(gp.gain * gp.bias6), 1e-6);
    EXPECT_NEAR(s.a7, logistic(gp.gain * gp.bias7), 1e-6);
    EXPECT_EQ(s.a1, 0.0);
    EXPECT_EQ(s.a3, 0.0);
}

TEST(Graded, RisingAboveSetPointTurnsClockwise) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const GradedParams gp;
    GradedNetworkState s = GradedNetworkState::initial(cfg, 56.0);
    bool cw = false, ccw = false;
    for (int k = 0; k < 20000; ++k) {
        const MotionCommand c = graded_network_advance(s, cfg, gp, 56.0 + 1e-3 * k, 1e-3);
        cw |= c.turn == Turn::cw_fixed;
        ccw |= c.turn == Turn::ccw_fixed;
    }
    EXPECT_TRUE(cw);
    EXPECT_FALSE(ccw);
}

TEST(Graded, ActivitiesBounded) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    const GradedParams gp;
    GradedNetworkState s = GradedNetworkState::initial(cfg, 40.0);
    for (int k = 0; k < 50000; ++k) {
        graded_network_advance(s, cfg, gp, 40.0 + 20.0 * std::sin(1e-4 * k), 1e-3);
        for (double a : {s.a1, s.a2, s.a3, s.a4, s.a5, s.a6, s.a7}) {
            ASSERT_GE(a, 0.0);
            ASSERT_LE(a, 1.0);
        }
    }
}

TEST(Graded, DecisionsOnlyAtInterval) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    GradedParams gp;
    gp.decision_interval = 0.5;
    gp.bias7 = 0.0;  // explorer crosses the decision level below the set-point
    GradedNetworkState s = GradedNetworkState::initial(cfg, 40.0);
    int decisions = 0;
    for (int k = 1; k <= 20000; ++k) {
        const MotionCommand c = graded_network_advance(s, cfg, gp, 40.0, 1e-3);
        if (k % 500 != 0) ASSERT_EQ(c.turn, Turn::none) << "step " << k;
        else decisions += c.turn != Turn::none;
    }
    EXPECT_GT(decisions, 0);
}

TEST(Graded, Validation) {
    GradedParams gp;
    EXPECT_NO_THROW(gp.validate());
    gp.decision_level = 1.0;
    EXPECT_THROW(gp.validate(), config_error);
}
