#pragma once

#include "wormnav/arena.hpp"
#include "wormnav/random.hpp"

namespace wormnav {

enum class Turn { none, cw_fixed, ccw_fixed, random_uniform, halt };
enum class SpeedMode { explore, track, zero };

// Output of one network step. Shared by the spiking and graded networks.
struct MotionCommand {
    Turn turn = Turn::none;
    SpeedMode speed = SpeedMode::explore;

    friend bool operator==(const MotionCommand&, const MotionCommand&) = default;
};

struct KinematicsParams {
    double v_explore = 0.3;               // v_1 [mm/s]
    double v_track = 0.09;                // v_2 [mm/s]
    double fixed_turn_deg = 3.33;
    double random_turn_halfwidth_deg = 22.5;

    static KinematicsParams tracking_defaults() { return {}; }
    static KinematicsParams obstacle_defaults() { return {0.3, 0.04, 3.33, 15.0}; }

    double speed_of(SpeedMode m) const {
        switch (m) {
        case SpeedMode::explore: return v_explore;
        case SpeedMode::track: return v_track;
        case SpeedMode::zero: return 0.0;
        }
        return 0.0;
    }
    void validate() const;
};

struct AgentState {
    Vec2 position;         // [mm]
    double heading = 0.0;  // [rad], kept in [-pi, pi)
    double speed = 0.3;    // [mm/s]
    bool alive = true;
};

// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

// Applies a decoded command. Clockwise turns decrement the heading.
// Throws std::logic_error on a halted agent.
AgentState apply_command(const AgentState& state, const MotionCommand& cmd, const KinematicsParams& params, Rng& rng);

// Straight-line advance with specular reflection at the walls.
AgentState integrate_position(const AgentState& state, double dt, const Bounds& bounds);

} // namespace wormnav
