#include "wormnav/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wormnav/errors.hpp"

namespace wormnav {

void KinematicsParams::validate() const {
    if (!(v_track > 0.0)) throw config_error("kinematics.v_track", "must be positive");
    if (!(v_explore > v_track)) throw config_error("kinematics.v_explore", "must exceed v_track");
    if (!(fixed_turn_deg > 0.0)) throw config_error("kinematics.fixed_turn_deg", "must be positive");
    if (!(random_turn_halfwidth_deg > 0.0))
        throw config_error("kinematics.random_turn_halfwidth_deg", "must be positive");
}

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(a + std::numbers::pi, two_pi);
    if (w < 0.0) w += two_pi;
    w -= std::numbers::pi;
    // fmod can round up to exactly +pi.
    if (w >= std::numbers::pi) w -= two_pi;
    return w;
}

AgentState apply_command(const AgentState& state, const MotionCommand& cmd, const KinematicsParams& params, Rng& rng) {
    if (!state.alive) throw std::logic_error("apply_command: agent has halted");
    constexpr double deg = std::numbers::pi / 180.0;
    AgentState next = state;
    switch (cmd.turn) {
    case Turn::none:
        break;
    case Turn::cw_fixed:
        next.heading = wrap_angle(state.heading - params.fixed_turn_deg * deg);
        next.speed = params.v_track;
        break;
    case Turn::ccw_fixed:
        next.heading = wrap_angle(state.heading + params.fixed_turn_deg * deg);
        next.speed = params.v_track;
        break;
    case Turn::random_uniform: {
        const double half = params.random_turn_halfwidth_deg * deg;
        const double delta = std::uniform_real_distribution<double>(-half, half)(rng);
        next.heading = wrap_angle(state.heading + delta);
        next.speed = params.v_explore;
        break;
    }
    case Turn::halt:
        next.speed = 0.0;
        next.alive = false;
        break;
    }
    return next;
}

AgentState integrate_position(const AgentState& state, double dt, const Bounds& bounds) {
    AgentState next = state;
    if (state.speed == 0.0) return next;
    double x = state.position.x + state.speed * dt * std::cos(state.heading);
    double y = state.position.y + state.speed * dt * std::sin(state.heading);
    double heading = state.heading;
    for (int pass = 0; pass < 4; ++pass) {
        bool reflected = false;
        if (x > bounds.x_max) {
            x = 2.0 * bounds.x_max - x;
            heading = std::numbers::pi - heading;
            reflected = true;
        } else if (x < bounds.x_min) {
            x = 2.0 * bounds.x_min - x;
            heading = std::numbers::pi - heading;
            reflected = true;
        }
        if (y > bounds.y_max) {
            y = 2.0 * bounds.y_max - y;
            heading = -heading;
            reflected = true;
        } else if (y < bounds.y_min) {
            y = 2.0 * bounds.y_min - y;
            heading = -heading;
            reflected = true;
        }
        if (!reflected) break;
    }
    next.position = {std::clamp(x, bounds.x_min, bounds.x_max), std::clamp(y, bounds.y_min, bounds.y_max)};
    next.heading = wrap_angle(heading);
    return next;
}

} // namespace wormnav
