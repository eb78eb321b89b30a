#pragma once

#include "wormnav/arena.hpp"
#include "wormnav/ase.hpp"
#include "wormnav/kinematics.hpp"
#include "wormnav/network.hpp"
#include "wormnav/random.hpp"

namespace wormnav {

// Truncated power-law run lengths, P(l) ~ l^-exponent on [s_min, s_max].
struct LevyParams {
    double s_min = 0.2649;  // [mm]
    double s_max = 40.0;    // [mm]
    double exponent = 2.0;
    double speed = 0.3;     // [mm/s]

    // Analytic mean run length [mm].
    double mean_length() const;
    void validate() const;
};

// Inverse-CDF sample for a given uniform variate u in [0, 1).
double levy_length_from_uniform(const LevyParams& params, double u);
double levy_sample_length(const LevyParams& params, Rng& rng);

// Memoryless forager: straight runs of sampled length, then a uniformly
// random new heading (instantaneous turn).
struct LevyWalker {
    AgentState agent;
    double remaining = 0.0;  // run length left [mm]
    long turns = 0;

    static LevyWalker start(Vec2 position, const LevyParams& params, Rng& rng);
};

void levy_forager_step(LevyWalker& walker, const LevyParams& params, Rng& rng, double dt, const Bounds& bounds);

// Graded (non-spiking) counterpart of the tracking circuit. Same wiring and
// command alphabet; ASE units follow the graded membrane equation, the
// comparators emit saturating analog levels and the three decision units are
// leaky low-pass filters of a logistic drive. A decision unit above the
// decision level issues its command once per decision interval.
struct GradedParams {
    double comparator_scale = 1.0;    // [mM]; a = tanh(max(0, +-(C - set_point)) / scale)
    double detector_scale = 0.67;     // [mV]; a = clamp((V - V_0) / scale, 0, 1)
    double gain = 8.0;                // logistic slope
    double bias5 = -1.2;              // logistic offsets of the decision units
    double bias6 = -1.2;
    double bias7 = -1.15;
    double tau_activity = 0.2;        // low-pass time constant [s]
    double decision_level = 0.5;
    double decision_interval = 0.1;   // [s]

    void validate() const;
};

struct GradedNetworkState {
    AseState n3, n4;  // graded, never reset
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double a5 = 0.0, a6 = 0.0, a7 = 0.0;
    double since_decision = 0.0;
    SpeedSetter last_speed_setter = SpeedSetter::explorer;

    static GradedNetworkState initial(const NetworkConfig& config, double concentration);
};

double logistic(double x);

MotionCommand graded_network_advance(GradedNetworkState& state, const NetworkConfig& config,
                                     const GradedParams& params, double concentration, double dt);

inline std::pair<GradedNetworkState, MotionCommand> graded_network_step(GradedNetworkState state,
                                                                        const NetworkConfig& config,
                                                                        const GradedParams& params,
                                                                        double concentration, double dt) {
    MotionCommand cmd = graded_network_advance(state, config, params, concentration, dt);
    return {std::move(state), cmd};
}

} // namespace wormnav
