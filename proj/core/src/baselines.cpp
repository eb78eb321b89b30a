#include "wormnav/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wormnav/errors.hpp"

namespace wormnav {

double LevyParams::mean_length() const {
    const double a = s_min, b = s_max, mu = exponent;
    if (mu == 2.0) return std::log(b / a) / (1.0 / a - 1.0 / b);
    if (mu == 1.0) return (b - a) / std::log(b / a);
    // Normalised density (mu-1) l^-mu / (a^(1-mu) - b^(1-mu)).
    const double norm = (std::pow(a, 1.0 - mu) - std::pow(b, 1.0 - mu)) / (mu - 1.0);
    const double first = (std::pow(b, 2.0 - mu) - std::pow(a, 2.0 - mu)) / (2.0 - mu);
    return first / norm;
}

void LevyParams::validate() const {
    if (!(s_min > 0.0)) throw config_error("levy.s_min", "must be positive");
    if (!(s_max > s_min)) throw config_error("levy.s_max", "must exceed s_min");
    if (!(exponent > 1.0)) throw config_error("levy.exponent", "must exceed 1");
    if (!(speed > 0.0)) throw config_error("levy.speed", "must be positive");
}

double levy_length_from_uniform(const LevyParams& p, double u) {
    if (p.exponent == 2.0) return p.s_min * p.s_max / (p.s_max - u * (p.s_max - p.s_min));
    const double k = 1.0 - p.exponent;
    const double lo = std::pow(p.s_min, k), hi = std::pow(p.s_max, k);
    return std::pow(lo + u * (hi - lo), 1.0 / k);
}

double levy_sample_length(const LevyParams& params, Rng& rng) {
    const double l = levy_length_from_uniform(params, uniform01(rng));
    return std::clamp(l, params.s_min, params.s_max);
}

LevyWalker LevyWalker::start(Vec2 position, const LevyParams& params, Rng& rng) {
    LevyWalker w;
    w.agent.position = position;
    w.agent.heading = wrap_angle(-std::numbers::pi + 2.0 * std::numbers::pi * uniform01(rng));
    w.agent.speed = params.speed;
    w.remaining = levy_sample_length(params, rng);
    return w;
}

void levy_forager_step(LevyWalker& w, const LevyParams& params, Rng& rng, double dt, const Bounds& bounds) {
    double left = params.speed * dt;  // distance to cover this step
    while (left > 0.0) {
        const double leg = std::min(left, w.remaining);
        w.agent.speed = params.speed;
        w.agent = integrate_position(w.agent, leg / params.speed, bounds);
        left -= leg;
        w.remaining -= leg;
        if (w.remaining <= 0.0) {
            w.agent.heading = wrap_angle(-std::numbers::pi + 2.0 * std::numbers::pi * uniform01(rng));
            w.remaining = levy_sample_length(params, rng);
            ++w.turns;
        }
    }
}

void GradedParams::validate() const {
    if (!(comparator_scale > 0.0)) throw config_error("graded.comparator_scale", "must be positive");
    if (!(detector_scale > 0.0)) throw config_error("graded.detector_scale", "must be positive");
    if (!(tau_activity > 0.0)) throw config_error("graded.tau_activity", "must be positive");
    if (!(decision_interval > 0.0)) throw config_error("graded.decision_interval", "must be positive");
    if (!(decision_level > 0.0 && decision_level < 1.0))
        throw config_error("graded.decision_level", "must lie in (0, 1)");
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

GradedNetworkState GradedNetworkState::initial(const NetworkConfig& config, double concentration) {
    GradedNetworkState s;
    s.n3 = AseState::adapted(config.asel, concentration);
    s.n4 = AseState::adapted(config.aser, concentration);
    return s;
}

MotionCommand graded_network_advance(GradedNetworkState& s, const NetworkConfig& cfg, const GradedParams& gp,
                                     double concentration, double dt) {
    const auto& w = cfg.weights;
    s.n3 = ase_membrane_step(s.n3, cfg.asel.graded(), concentration, dt);
    s.n4 = ase_membrane_step(s.n4, cfg.aser.graded(), concentration, dt);

    s.a1 = std::tanh(std::max(0.0, concentration - cfg.set_point) / gp.comparator_scale);
    s.a2 = std::tanh(std::max(0.0, cfg.set_point - concentration) / gp.comparator_scale);
    s.a3 = std::clamp((s.n3.potential - cfg.asel.rest_potential) / gp.detector_scale, 0.0, 1.0);
    s.a4 = std::clamp((s.n4.potential - cfg.aser.rest_potential) / gp.detector_scale, 0.0, 1.0);

    const double t5 = logistic(gp.gain * (w.w15 * s.a1 + w.w35 * s.a3 + gp.bias5));
    const double t6 = logistic(gp.gain * (w.w26 * s.a2 + w.w46 * s.a4 + gp.bias6));
    const double t7 = logistic(gp.gain * (w.w17 * s.a1 + w.w27 * s.a2 + w.w37 * s.a3 + w.w47 * s.a4 + gp.bias7));
    const double k = dt / gp.tau_activity;
    s.a5 += k * (t5 - s.a5);
    s.a6 += k * (t6 - s.a6);
    s.a7 += k * (t7 - s.a7);

    const SpeedMode held = s.last_speed_setter == SpeedSetter::coincidence ? SpeedMode::track : SpeedMode::explore;
    s.since_decision += dt;
    if (s.since_decision + 1e-12 < gp.decision_interval) return {Turn::none, held};
    s.since_decision = 0.0;

    if (s.a5 >= gp.decision_level) {
        s.last_speed_setter = SpeedSetter::coincidence;
        return {Turn::cw_fixed, SpeedMode::track};
    }
    if (s.a6 >= gp.decision_level) {
        s.last_speed_setter = SpeedSetter::coincidence;
        return {Turn::ccw_fixed, SpeedMode::track};
    }
    if (s.a7 >= gp.decision_level) {
        s.last_speed_setter = SpeedSetter::explorer;
        return {Turn::random_uniform, SpeedMode::explore};
    }
    return {Turn::none, held};
}

} // namespace wormnav
