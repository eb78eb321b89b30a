#pragma once

namespace wormnav {

// Leaky integrate-and-fire parameters.
// Units: capacitance [nF], leak conductance [uS], potentials [mV].
// With these units C*dV/dt is in nA when dV/dt is taken per millisecond.
struct LifParams {
    double capacitance = 1.0;        // [nF]
    double leak_conductance = 0.05;  // [uS]
    double rest_potential = -70.0;   // [mV]
    double threshold = -50.0;        // [mV]
    double spike_value = 30.0;       // [mV]

    // Membrane time constant C/g_L [ms].
    double time_constant_ms() const { return capacitance / leak_conductance; }

    // Smallest constant current that eventually reaches threshold [nA].
    double rheobase() const { return leak_conductance * (threshold - rest_potential); }

    // Throws config_error when an invariant is violated.
    void validate(const char* name = "lif") const;
};

struct LifState {
    double potential = -70.0;  // [mV]; V_max on a spike step
    bool spiked_now = false;

    static LifState at_rest(const LifParams& p) { return {p.rest_potential, false}; }
};

// One forward-Euler step of C dV/dt = -g_L (V - V_0) + I_app + I_syn.
// A state that spiked on the previous step restarts from V_0. If the updated
// potential reaches threshold the returned state is {V_max, spiked_now=true}.
// Currents in nA, dt in seconds.
LifState lif_step(const LifState& state, const LifParams& params, double i_app, double i_syn, double dt);

// Closed-form inter-spike interval [s] under constant current `i` from rest,
// or +inf when `i` does not exceed the rheobase.
double lif_analytic_period(const LifParams& params, double i);

// Constant current giving the requested firing rate [nA] (inverse of the above).
double lif_current_for_rate(const LifParams& params, double rate_hz);

} // namespace wormnav
