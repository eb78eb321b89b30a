#include "wormnav/ase.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wormnav/errors.hpp"

namespace wormnav {

namespace {

// Slow channels and slow adaptation: the detector ignores 0.1 s sensor
// glitches but still answers the ~0.1 mM/s gradients seen while crawling.
AseParams navigation_defaults(AseSide side) {
    AseParams p;
    p.side = side;
    p.tau_m = 117.0;
    p.g_max = 1.16;
    p.beta_d = 0.834;
    p.gamma_d = 0.155;
    p.delta_d = 0.0878;
    p.alpha0_d = 0.0607;
    p.tau_adapt = 278.0;
    p.spike_threshold = -69.33;
    return p;
}

} // namespace

AseParams AseParams::left_defaults() { return navigation_defaults(AseSide::left); }

AseParams AseParams::right_defaults() { return navigation_defaults(AseSide::right); }

double AseParams::max_rate(double max_concentration) const {
    const double alpha_d = alpha0_d * std::max(max_concentration, 0.0);
    const double alpha_h = side == AseSide::right ? alpha0_h : 0.0;
    return std::max({alpha_d, beta_d + gamma_d, delta_d, alpha_h, beta_h});
}

void AseParams::validate(const char* name) const {
    const std::string n(name);
    if (!(tau_m > 0.0)) throw config_error(n + ".tau_m", "must be positive");
    if (!(g_max > 0.0)) throw config_error(n + ".g_max", "must be positive");
    for (auto [v, f] : {std::pair{beta_d, "beta_d"}, {gamma_d, "gamma_d"}, {delta_d, "delta_d"}, {beta_h, "beta_h"},
                        {alpha0_d, "alpha0_d"}, {alpha0_h, "alpha0_h"}})
        if (!(v >= 0.0)) throw config_error(n + "." + f, "rates must be non-negative");
    if (!(reversal_depol > rest_potential && rest_potential > reversal_hyper))
        throw config_error(n + ".reversal_depol", "need reversal_depol > rest_potential > reversal_hyper");
    if (!(tau_adapt > 0.0)) throw config_error(n + ".tau_adapt", "must be positive");
    if (side == AseSide::right && !(nacl_r_min > 0.0)) throw config_error(n + ".nacl_r_min", "must be positive");
    if (!(spike_value >= rest_potential)) throw config_error(n + ".spike_value", "must be at least rest_potential");
}

AseState AseState::adapted(const AseParams& params, double concentration) {
    AseState s;
    s.potential = params.rest_potential;
    s.adapt_threshold = params.side == AseSide::right ? std::max(concentration, params.nacl_r_min) : concentration;
    return s;
}

double depol_binding_rate(const AseParams& params, double concentration, double adapt_threshold) {
    if (params.side == AseSide::left)
        return concentration >= adapt_threshold ? params.alpha0_d * (concentration - adapt_threshold) : 0.0;
    // Magnitude of the deviation below threshold; see the README on sign conventions.
    return concentration <= adapt_threshold ? params.alpha0_d * (adapt_threshold - concentration) : 0.0;
}

double hyper_binding_rate(const AseParams& params, double concentration) {
    if (params.side == AseSide::left) return 0.0;
    return concentration - params.eta_r >= 0.0 ? params.alpha0_h : 0.0;
}

std::pair<DepolChannelState, HyperChannelState> channel_step(const DepolChannelState& depol,
                                                            const HyperChannelState& hyper, double alpha_d,
                                                            double alpha_h, const AseParams& params, double dt) {
    const double largest = std::max({alpha_d, params.beta_d + params.gamma_d, params.delta_d, alpha_h, params.beta_h});
    if (!(dt > 0.0) || !(dt * largest < 1.0))
        throw config_error("dt", "channel_step requires dt > 0 and dt * max_rate < 1");

    const double u = depol.unbound, b = depol.bound, i = depol.inactive;
    double nu = u + dt * (-alpha_d * u + params.beta_d * b + params.delta_d * i);
    double nb = b + dt * (alpha_d * u - (params.beta_d + params.gamma_d) * b);
    double ni = i + dt * (params.gamma_d * b - params.delta_d * i);
    nu = std::clamp(nu, 0.0, 1.0);
    nb = std::clamp(nb, 0.0, 1.0);
    ni = std::clamp(ni, 0.0, 1.0);
    const double sd = nu + nb + ni;

    const double hu = hyper.unbound, hb = hyper.bound;
    double nhu = std::clamp(hu + dt * (-alpha_h * hu + params.beta_h * hb), 0.0, 1.0);
    double nhb = std::clamp(hb + dt * (alpha_h * hu - params.beta_h * hb), 0.0, 1.0);
    const double sh = nhu + nhb;

    return {DepolChannelState{nu / sd, nb / sd, ni / sd}, HyperChannelState{nhu / sh, nhb / sh}};
}

double adapt_threshold_step(const AseState& state, const AseParams& params, double concentration, double dt) {
    const double th = state.adapt_threshold;
    double rate;
    if (params.side == AseSide::left) {
        rate = concentration >= th ? (concentration - th) / params.tau_adapt : -th / params.tau_adapt;
        return th + dt * rate;
    }
    rate = concentration <= th ? (concentration - th) / params.tau_adapt : th / params.tau_adapt;
    return std::max(th + dt * rate, params.nacl_r_min);
}

AseState ase_membrane_step(const AseState& state, const AseParams& params, double concentration, double dt) {
    if (!std::isfinite(state.potential) || !std::isfinite(concentration) || !std::isfinite(state.adapt_threshold))
        throw invalid_state_error("ase_membrane_step: non-finite input");

    const double alpha_d = depol_binding_rate(params, concentration, state.adapt_threshold);
    const double alpha_h = hyper_binding_rate(params, concentration);

    AseState next;
    std::tie(next.depol, next.hyper) = channel_step(state.depol, state.hyper, alpha_d, alpha_h, params, dt);

    const double gd = params.g_max * next.depol.bound * next.depol.bound;
    const double gh = params.g_max * next.hyper.bound * next.hyper.bound;
    const double v = state.spiked_now ? params.rest_potential : state.potential;
    const double dv = ((params.rest_potential - v) + gd * (params.reversal_depol - v) + gh * (params.reversal_hyper - v)) /
                      params.tau_m;
    const double v_next = v + dt * 1e3 * dv;
    if (v_next >= params.spike_threshold) {
        next.potential = params.spike_value;
        next.spiked_now = true;
    } else {
        next.potential = v_next;
        next.spiked_now = false;
    }
    next.adapt_threshold = adapt_threshold_step(state, params, concentration, dt);
    return next;
}

double spike_rate_vs_gradient(const AseParams& params, double gradient, double duration, double baseline, double dt) {
    if (!(duration > 0.0)) return 0.0;
    // Ramp in the neuron's preferred direction.
    const double slope = params.side == AseSide::left ? std::abs(gradient) : -std::abs(gradient);
    AseState s = AseState::adapted(params, baseline);
    const auto steps = static_cast<long>(std::llround(duration / dt));
    long spikes = 0;
    for (long k = 0; k < steps; ++k) {
        const double c = std::max(0.0, baseline + slope * (static_cast<double>(k) * dt));
        s = ase_membrane_step(s, params, c, dt);
        if (s.spiked_now) ++spikes;
    }
    return static_cast<double>(spikes) / duration;
}

std::vector<CalibrationRow> gradient_sweep(const AseParams& params, const std::vector<double>& gradients,
                                           const std::vector<double>& thresholds, double duration) {
    std::vector<CalibrationRow> rows;
    rows.reserve(gradients.size() * thresholds.size());
    for (double vt : thresholds) {
        AseParams p = params;
        p.spike_threshold = vt;
        for (double g : gradients) rows.push_back({g, vt, spike_rate_vs_gradient(p, g, duration)});
    }
    return rows;
}

double detection_floor(const AseParams& params, double duration, double upper) {
    if (spike_rate_vs_gradient(params, upper, duration) <= 0.0) return upper;
    double lo = 0.0, hi = upper;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (spike_rate_vs_gradient(params, mid, duration) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace wormnav
