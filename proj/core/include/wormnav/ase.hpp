#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace wormnav {

enum class AseSide { left, right };

// Gradient-detector neuron modelled on the ASE pair. ASEL (left) responds to
// rising concentration, ASER (right) to falling concentration.
//
// Membrane: tau_m dV/dt = (V_0 - V) + g_d (V_d - V) + g_h (V_h - V), where
// g_{d,h} = g_max * bound^2 are dimensionless gains relative to the leak.
// Rates are per second, concentrations in mM, potentials in mV.
struct AseParams {
    AseSide side = AseSide::left;
    double tau_m = 20.0;            // [ms]
    double rest_potential = -70.0;  // V_0 [mV]
    double reversal_depol = 0.0;    // V_d [mV]
    double reversal_hyper = -90.0;  // V_h [mV]
    double g_max = 0.6;             // peak channel gain (dimensionless)
    double beta_d = 1.0;            // bound -> unbound [1/s]
    double gamma_d = 0.5;           // bound -> inactive [1/s]
    double delta_d = 1.0;           // inactive -> unbound [1/s]
    double beta_h = 2.0;            // hyper bound -> unbound [1/s]
    double alpha0_d = 10.0;         // binding-rate scale [1/(s mM)]
    double alpha0_h = 2.0;          // hyper binding rate when active [1/s]
    double eta_r = 60.0;            // hyper activation level [mM], ASER only
    double tau_adapt = 3.0;         // threshold adaptation time constant [s]
    double nacl_r_min = 1.0;        // ASER threshold floor [mM]
    double spike_threshold = -60.0; // V_T [mV]; +inf gives the graded model
    double spike_value = 30.0;      // V_max [mV]

    static AseParams left_defaults();
    static AseParams right_defaults();

    // Copy with spiking disabled (graded potential).
    AseParams graded() const {
        AseParams p = *this;
        p.spike_threshold = std::numeric_limits<double>::infinity();
        return p;
    }

    // Largest transition rate reachable for concentrations up to `max_concentration`.
    double max_rate(double max_concentration) const;

    void validate(const char* name = "ase") const;
};

struct DepolChannelState {
    double unbound = 1.0;
    double bound = 0.0;
    double inactive = 0.0;
};

struct HyperChannelState {
    double unbound = 1.0;
    double bound = 0.0;
};

struct AseState {
    double potential = -70.0;
    DepolChannelState depol;
    HyperChannelState hyper;
    double adapt_threshold = 0.0;  // NaCl_L or NaCl_R [mM]
    bool spiked_now = false;

    // Resting neuron whose threshold is adapted to `concentration`.
    static AseState adapted(const AseParams& params, double concentration);
};

double depol_binding_rate(const AseParams& params, double concentration, double adapt_threshold);
double hyper_binding_rate(const AseParams& params, double concentration);

// Forward-Euler step of both channel state vectors, renormalised to sum to one.
// Throws config_error if dt times the largest rate is not below one.
std::pair<DepolChannelState, HyperChannelState> channel_step(const DepolChannelState& depol,
                                                            const HyperChannelState& hyper, double alpha_d,
                                                            double alpha_h, const AseParams& params, double dt);

// Threshold adaptation, returns the new NaCl_L / NaCl_R (ASER floored at nacl_r_min).
double adapt_threshold_step(const AseState& state, const AseParams& params, double concentration, double dt);

// Full neuron step: binding rates from the step-start state, then channels,
// membrane and adaptation in that order.
AseState ase_membrane_step(const AseState& state, const AseParams& params, double concentration, double dt);

// Average spike frequency [Hz] during a linear ramp with slope `gradient`
// [mM/s] lasting `duration` seconds, starting adapted at `baseline`.
double spike_rate_vs_gradient(const AseParams& params, double gradient, double duration, double baseline = 40.0,
                              double dt = 1e-3);

struct CalibrationRow {
    double gradient;         // [mM/s]
    double spike_threshold;  // [mV]
    double frequency;        // [Hz]
};

// Frequency table over the cartesian product of gradients and thresholds.
std::vector<CalibrationRow> gradient_sweep(const AseParams& params, const std::vector<double>& gradients,
                                           const std::vector<double>& thresholds, double duration);

// Smallest gradient magnitude [mM/s] eliciting at least one spike during
// `duration`, found by bisection on [0, upper].
double detection_floor(const AseParams& params, double duration, double upper = 1.0);

} // namespace wormnav
