#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "wormnav/ase.hpp"
#include "wormnav/kinematics.hpp"
#include "wormnav/lif.hpp"
#include "wormnav/synapse.hpp"

namespace wormnav {

enum class NetworkMode { tracking, obstacle };

// Signed synaptic weights, named w_<pre><post>.
struct NetworkWeights {
    double w15 = 1.0;
    double w35 = 1.0;
    double w26 = 1.0;
    double w46 = 1.0;
    double w17 = 1.0;
    double w27 = 1.0;
    double w37 = -1.0;
    double w47 = -1.0;
    double w57 = 0.0;  // obstacle mode only

    friend bool operator==(const NetworkWeights&, const NetworkWeights&) = default;
};

// Full wiring of the seven-neuron circuit.
//
// N1/N2 compare the reading with a level and fire at a fixed rate, N3/N4 are
// the ASEL/ASER gradient detectors, N5/N6 are coincidence detectors that
// command deterministic turns, and N7 commands random exploration.
//
// Synapses from the comparators use `comparator_kernel`; synapses from the
// spiking detectors (N3, N4, N5) use `detector_kernel`.
struct NetworkConfig {
    NetworkMode mode = NetworkMode::tracking;
    double set_point = 55.0;  // NaCl_track [mM]
    double i_app0 = 0.0;      // comparator drive [nA]; 0 picks the 10 Hz value
    NetworkWeights weights;
    double bias5 = -1.0;  // [nA]
    double bias6 = -1.0;
    double bias7 = -1.0;
    double obstacle_avoid_level = 65.0;  // S_avoid
    double obstacle_goal_level = 20.0;   // S_desired

    LifParams comparator_lif;
    LifParams coincidence_lif;
    LifParams explorer_lif;
    SynapseKernelParams comparator_kernel;
    SynapseKernelParams detector_kernel;
    AseParams asel = AseParams::left_defaults();
    AseParams aser = AseParams::right_defaults();

    static NetworkConfig tracking_defaults(double set_point = 55.0);
    static NetworkConfig obstacle_defaults();

    // Comparator drive actually used (resolves i_app0 == 0).
    double comparator_drive() const;
    // Level N1 compares against (set-point, or S_avoid in obstacle mode).
    double upper_level() const { return mode == NetworkMode::obstacle ? obstacle_avoid_level : set_point; }
    // Level N2 compares against (set-point, or S_desired in obstacle mode).
    double lower_level() const { return mode == NetworkMode::obstacle ? obstacle_goal_level : set_point; }

    void validate() const;
};

enum class Comparator { upper, lower };  // N1, N2

// N1 receives i_app0 when C > level, N2 when C < level; zero otherwise.
double comparator_current(double level, double concentration, Comparator which, double i_app0);

enum class SpeedSetter { coincidence, explorer };

// Indices into NetworkState::spikes.
enum Neuron : std::size_t { N1 = 0, N2, N3, N4, N5, N6, N7 };

struct NetworkState {
    LifState n1, n2, n5, n6, n7;
    AseState n3, n4;
    // Presynaptic traces of N1..N5 (recursive form of the kernel sum).
    std::array<SynapseTrace, 5> traces{};
    SpeedSetter last_speed_setter = SpeedSetter::explorer;
    bool halted = false;
    double time = 0.0;  // [s]
    std::uint64_t steps = 0;
    std::array<bool, 7> spikes{};  // spikes emitted on the last step

    // Resting network, ASE thresholds adapted to `concentration`.
    static NetworkState initial(const NetworkConfig& config, double concentration, double dt);
};

// Advances every neuron by dt under the given reading and decodes the motion
// command for this step. In-place form used by the simulators.
MotionCommand network_advance(NetworkState& state, const NetworkConfig& config, double concentration, double dt);

inline std::pair<NetworkState, MotionCommand> network_step(NetworkState state, const NetworkConfig& config,
                                                           double concentration, double dt) {
    MotionCommand cmd = network_advance(state, config, concentration, dt);
    return {std::move(state), cmd};
}

struct CoincidenceProbe {
    double comparator_rate = 10.0;  // regular stream from N1/N2 [Hz]
    double detector_min_rate = 2.0; // weakest detector stream that must be passed [Hz]
    double detector_max_rate = 40.0;// strongest detector stream that must be rejected alone [Hz]
    double duration = 10.0;         // [s]
    double dt = 1e-3;
};

// Result of probing a coincidence detector at a given bias.
struct ProbeOutcome {
    int single_comparator_spikes = 0;
    int single_detector_spikes = 0;
    int dual_spikes = 0;
    int dual_empty_windows = 0;  // 1 s windows without an output spike
};

ProbeOutcome probe_coincidence(const LifParams& lif, const SynapseKernelParams& comparator_kernel,
                               const SynapseKernelParams& detector_kernel, double w_comparator, double w_detector,
                               double bias, const CoincidenceProbe& probe);

// Bias for a coincidence detector such that either input stream alone never
// fires it while both together do. The feasible interval is bracketed by
// bisection and its midpoint returned. Throws calibration_error if empty.
double calibrate_coincidence_bias(const LifParams& lif, const SynapseKernelParams& comparator_kernel,
                                  const SynapseKernelParams& detector_kernel, double w_comparator,
                                  double w_detector, const CoincidenceProbe& probe = {});

} // namespace wormnav
