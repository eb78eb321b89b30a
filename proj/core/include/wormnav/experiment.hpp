#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wormnav/arena.hpp"
#include "wormnav/baselines.hpp"
#include "wormnav/kinematics.hpp"
#include "wormnav/network.hpp"

namespace wormnav {

enum class Strategy { snn, graded, levy };

struct ExperimentConfig {
    ScalarField arena = ScalarField::default_arena();
    NetworkConfig network = NetworkConfig::tracking_defaults();
    KinematicsParams kinematics;
    LevyParams levy;
    GradedParams graded;
    Strategy strategy = Strategy::snn;
    NoiseModel noise;
    Vec2 start{20.0, 20.0};          // [mm]
    double episode_duration = 1500.0;  // [s]
    int n_episodes = 200;
    double success_tolerance = 0.5;    // [mM]
    double behavior_dt = 0.1;          // [s]
    double neural_dt = 1e-3;           // [s]
    std::uint64_t seed = 1;
    int parallel = 1;
    bool record_trajectory = false;
    bool record_raster = false;
    // Reference range used for percentage reporting [mM].
    double concentration_range = 60.0;

    static ExperimentConfig tracking_defaults();
    static ExperimentConfig obstacle_defaults();

    // Throws config_error naming the first offending field.
    void validate() const;
};

struct TrajectoryRow {
    double t;        // [s]
    double x, y;     // [mm]
    double heading;  // [rad]
    double speed;    // [mm/s]
    double sensed;   // [mM]

    friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

struct RasterRow {
    double t;
    double concentration;
    std::array<bool, 7> spikes;

    friend bool operator==(const RasterRow&, const RasterRow&) = default;
};

struct RunMetrics {
    bool success = false;
    std::optional<double> time_to_target;  // [s]
    double deviation_mean = 0.0;           // [mM] over the tracking window
    double deviation_std = 0.0;
    std::size_t tracking_samples = 0;
    double deviation_sum = 0.0;     // sum |C - set_point| over the window
    double deviation_sq_sum = 0.0;  // sum of squares over the window
    double path_length = 0.0;       // [mm]
    double distance_commanded = 0.0;  // sum of speed * dt [mm]
    long random_turns = 0;
    long fixed_turns = 0;
    // Obstacle mode.
    bool reached_goal = false;
    bool entered_avoid_region = false;
    bool halted = false;
    double max_concentration = 0.0;  // clean, along the path
    std::vector<TrajectoryRow> trajectory;
    std::vector<RasterRow> raster;

    friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct BatchStats {
    int n_episodes = 0;
    int successes = 0;
    double success_rate = 0.0;
    double time_mean = 0.0;  // over successes [s]
    double time_std = 0.0;
    double deviation_mean = 0.0;  // pooled over all tracking samples [mM]
    double deviation_std = 0.0;
    double deviation_pct = 0.0;  // of the concentration range
    double deviation_std_pct = 0.0;
    double concentration_range = 60.0;
    double within_550s_rate = 0.0;  // fraction of episodes reaching the target before 550 s

    friend bool operator==(const BatchStats&, const BatchStats&) = default;
};

RunMetrics run_episode(const ExperimentConfig& config, std::uint64_t seed);

BatchStats aggregate(const std::vector<RunMetrics>& runs, double concentration_range);

struct BatchResult {
    BatchStats stats;
    std::vector<RunMetrics> runs;
};

// Episodes use seeds seed + i; results are aggregated in episode order so
// any parallelism degree gives identical output.
BatchResult run_batch_detailed(const ExperimentConfig& config);
BatchStats run_batch(const ExperimentConfig& config);

struct CornerResult {
    std::string label;       // e.g. "N5+ N6- N7+"
    std::string case_name;   // "Case 1".."Case 6" for the highlighted cases, else empty
    NetworkWeights weights;
    BatchStats stats;
};

// Shifts every incoming weight of N5, N6, N7 by the drift fraction so each
// neuron becomes maximally more (+) or less (-) sensitive. Excitatory weights
// scale by (1 +- drift), inhibitory magnitudes by (1 -+ drift).
NetworkWeights drift_weights(const NetworkWeights& base, bool n5_more, bool n6_more, bool n7_more, double drift);

// Baseline followed by the eight sensitivity corners.
std::vector<CornerResult> corner_analysis(const ExperimentConfig& config, double drift);

} // namespace wormnav
