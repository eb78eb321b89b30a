#include "wormnav/lif.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wormnav/errors.hpp"

namespace wormnav {

void LifParams::validate(const char* name) const {
    const std::string n(name);
    if (!(capacitance > 0.0)) throw config_error(n + ".capacitance", "must be positive");
    if (!(leak_conductance > 0.0)) throw config_error(n + ".leak_conductance", "must be positive");
    if (!(threshold > rest_potential)) throw config_error(n + ".threshold", "must exceed rest_potential");
    if (!(spike_value >= threshold)) throw config_error(n + ".spike_value", "must be at least threshold");
}

LifState lif_step(const LifState& state, const LifParams& params, double i_app, double i_syn, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("lif_step: dt must be positive");
    if (!std::isfinite(state.potential) || !std::isfinite(i_app) || !std::isfinite(i_syn) || !std::isfinite(dt))
        throw invalid_state_error("lif_step: non-finite input");

    const double v = state.spiked_now ? params.rest_potential : state.potential;
    const double dt_ms = dt * 1e3;
    const double dv = (-params.leak_conductance * (v - params.rest_potential) + i_app + i_syn) / params.capacitance;
    const double next = v + dt_ms * dv;
    if (next >= params.threshold) return {params.spike_value, true};
    return {next, false};
}

double lif_analytic_period(const LifParams& params, double i) {
    const double gap = params.leak_conductance * (params.threshold - params.rest_potential);
    if (i <= gap) return std::numeric_limits<double>::infinity();
    const double tau_s = params.time_constant_ms() * 1e-3;
    return -tau_s * std::log(1.0 - gap / i);
}

double lif_current_for_rate(const LifParams& params, double rate_hz) {
    if (!(rate_hz > 0.0)) throw std::invalid_argument("lif_current_for_rate: rate must be positive");
    const double gap = params.leak_conductance * (params.threshold - params.rest_potential);
    const double tau_s = params.time_constant_ms() * 1e-3;
    return gap / (1.0 - std::exp(-1.0 / (rate_hz * tau_s)));
}

} // namespace wormnav
