#include "wormnav/network.hpp"

#include <cmath>
#include <string>

#include "wormnav/errors.hpp"

namespace wormnav {

namespace {

constexpr double comparator_rate_hz = 10.0;

NetworkConfig base_config() {
    NetworkConfig c;
    c.comparator_lif = LifParams{};
    c.coincidence_lif = LifParams{10.0, 0.5, -70.0, -50.0, 30.0};
    // One second membrane constant: the explorer forgets inhibition quickly,
    // so it answers comparator onset within ~2 s at any bias history.
    c.explorer_lif = LifParams{150.0, 0.15, -70.0, -50.0, 30.0};
    c.comparator_kernel = SynapseKernelParams{4.0, 200.0, 20.0};
    c.detector_kernel = SynapseKernelParams{25.0, 5.0, 1.0};
    return c;
}

double calibrated_coincidence_bias() {
    static const double bias = [] {
        const NetworkConfig c = base_config();
        return calibrate_coincidence_bias(c.coincidence_lif, c.comparator_kernel, c.detector_kernel, 1.0, 1.0);
    }();
    return bias;
}

} // namespace

NetworkConfig NetworkConfig::tracking_defaults(double set_point) {
    NetworkConfig c = base_config();
    c.mode = NetworkMode::tracking;
    c.set_point = set_point;
    c.weights = NetworkWeights{};
    c.bias5 = calibrated_coincidence_bias();
    c.bias6 = c.bias5;
    c.bias7 = -2.69;
    return c;
}

NetworkConfig NetworkConfig::obstacle_defaults() {
    NetworkConfig c = base_config();
    c.mode = NetworkMode::obstacle;
    c.set_point = 0.0;
    c.weights = NetworkWeights{};
    c.weights.w17 = 0.0;
    c.weights.w27 = -1.0;
    c.weights.w37 = 0.0;
    c.weights.w47 = -1.0;
    c.weights.w57 = -1.0;
    c.weights.w26 = 0.0;
    c.weights.w46 = 0.0;
    c.bias5 = calibrated_coincidence_bias();
    c.bias6 = 0.0;
    c.bias7 = 1.36;
    // The positive bias alone must drive the explorer past threshold, which
    // needs a leak current at threshold below 1.36 nA.
    c.explorer_lif.leak_conductance = 0.015;
    return c;
}

double NetworkConfig::comparator_drive() const {
    return i_app0 > 0.0 ? i_app0 : lif_current_for_rate(comparator_lif, comparator_rate_hz);
}

void NetworkConfig::validate() const {
    comparator_lif.validate("network.comparator_lif");
    coincidence_lif.validate("network.coincidence_lif");
    explorer_lif.validate("network.explorer_lif");
    comparator_kernel.validate("network.comparator_kernel");
    detector_kernel.validate("network.detector_kernel");
    asel.validate("network.asel");
    aser.validate("network.aser");
    if (asel.side != AseSide::left) throw config_error("network.asel.side", "must be left");
    if (aser.side != AseSide::right) throw config_error("network.aser.side", "must be right");
    if (!(i_app0 >= 0.0)) throw config_error("network.i_app0", "must be non-negative");
    const auto& w = weights;
    if (!(w.w15 > 0.0)) throw config_error("network.weights.w15", "must be excitatory (> 0)");
    if (!(w.w35 > 0.0)) throw config_error("network.weights.w35", "must be excitatory (> 0)");
    if (mode == NetworkMode::tracking) {
        if (!(w.w26 > 0.0)) throw config_error("network.weights.w26", "must be excitatory (> 0)");
        if (!(w.w46 > 0.0)) throw config_error("network.weights.w46", "must be excitatory (> 0)");
        if (!(w.w17 > 0.0)) throw config_error("network.weights.w17", "must be excitatory (> 0)");
        if (!(w.w27 > 0.0)) throw config_error("network.weights.w27", "must be excitatory (> 0)");
        if (!(w.w37 < 0.0)) throw config_error("network.weights.w37", "must be inhibitory (< 0)");
        if (!(w.w47 < 0.0)) throw config_error("network.weights.w47", "must be inhibitory (< 0)");
        if (!(bias5 < 0.0)) throw config_error("network.bias5", "must be negative");
        if (!(bias6 < 0.0)) throw config_error("network.bias6", "must be negative");
        if (!(bias7 < 0.0)) throw config_error("network.bias7", "must be negative in tracking mode");
    } else {
        if (w.w27 != -1.0) throw config_error("network.weights.w27", "must be -1 in obstacle mode");
        if (w.w47 != -1.0) throw config_error("network.weights.w47", "must be -1 in obstacle mode");
        if (w.w57 != -1.0) throw config_error("network.weights.w57", "must be -1 in obstacle mode");
        if (!(bias5 < 0.0)) throw config_error("network.bias5", "must be negative");
        if (!(obstacle_avoid_level > obstacle_goal_level))
            throw config_error("network.obstacle_avoid_level", "must exceed obstacle_goal_level");
    }
}

double comparator_current(double level, double concentration, Comparator which, double i_app0) {
    if (which == Comparator::upper) return concentration > level ? i_app0 : 0.0;
    return concentration < level ? i_app0 : 0.0;
}

NetworkState NetworkState::initial(const NetworkConfig& config, double concentration, double dt) {
    NetworkState s;
    s.n1 = LifState::at_rest(config.comparator_lif);
    s.n2 = LifState::at_rest(config.comparator_lif);
    s.n5 = LifState::at_rest(config.coincidence_lif);
    s.n6 = LifState::at_rest(config.coincidence_lif);
    s.n7 = LifState::at_rest(config.explorer_lif);
    s.n3 = AseState::adapted(config.asel, concentration);
    s.n4 = AseState::adapted(config.aser, concentration);
    s.traces[N1] = SynapseTrace(config.comparator_kernel, dt);
    s.traces[N2] = SynapseTrace(config.comparator_kernel, dt);
    s.traces[N3] = SynapseTrace(config.detector_kernel, dt);
    s.traces[N4] = SynapseTrace(config.detector_kernel, dt);
    s.traces[N5] = SynapseTrace(config.detector_kernel, dt);
    return s;
}

MotionCommand network_advance(NetworkState& s, const NetworkConfig& cfg, double concentration, double dt) {
    const bool obstacle = cfg.mode == NetworkMode::obstacle;
    const auto& w = cfg.weights;
    const double drive = cfg.comparator_drive();

    // Synaptic input at the start of the step, from spikes up to now.
    const double c1 = s.traces[N1].current(), c2 = s.traces[N2].current();
    const double c3 = s.traces[N3].current(), c4 = s.traces[N4].current(), c5 = s.traces[N5].current();
    const double syn5 = w.w15 * c1 + w.w35 * c3;
    const double syn6 = w.w26 * c2 + w.w46 * c4;
    const double syn7 = obstacle ? w.w27 * c2 + w.w47 * c4 + w.w57 * c5
                                 : w.w17 * c1 + w.w27 * c2 + w.w37 * c3 + w.w47 * c4;

    s.n1 = lif_step(s.n1, cfg.comparator_lif,
                    comparator_current(cfg.upper_level(), concentration, Comparator::upper, drive), 0.0, dt);
    s.n2 = lif_step(s.n2, cfg.comparator_lif,
                    comparator_current(cfg.lower_level(), concentration, Comparator::lower, drive), 0.0, dt);
    s.n3 = ase_membrane_step(s.n3, cfg.asel, concentration, dt);
    s.n4 = ase_membrane_step(s.n4, cfg.aser, concentration, dt);
    s.n5 = lif_step(s.n5, cfg.coincidence_lif, cfg.bias5, syn5, dt);
    // N6 is not part of the obstacle circuit.
    if (!obstacle) s.n6 = lif_step(s.n6, cfg.coincidence_lif, cfg.bias6, syn6, dt);
    s.n7 = lif_step(s.n7, cfg.explorer_lif, cfg.bias7, syn7, dt);

    s.spikes = {s.n1.spiked_now, s.n2.spiked_now, s.n3.spiked_now, s.n4.spiked_now,
                s.n5.spiked_now, !obstacle && s.n6.spiked_now, s.n7.spiked_now};
    for (std::size_t k = 0; k < s.traces.size(); ++k) {
        s.traces[k].advance();
        if (s.spikes[k]) s.traces[k].on_spike();
    }
    s.time += dt;
    ++s.steps;

    MotionCommand cmd;
    if (obstacle) {
        if (s.halted || s.spikes[N2]) {
            s.halted = true;
            return {Turn::halt, SpeedMode::zero};
        }
    }
    if (s.spikes[N5]) {
        s.last_speed_setter = SpeedSetter::coincidence;
        return {Turn::cw_fixed, SpeedMode::track};
    }
    if (s.spikes[N6]) {
        s.last_speed_setter = SpeedSetter::coincidence;
        return {Turn::ccw_fixed, SpeedMode::track};
    }
    if (s.spikes[N7]) {
        s.last_speed_setter = SpeedSetter::explorer;
        return {Turn::random_uniform, SpeedMode::explore};
    }
    cmd.turn = Turn::none;
    cmd.speed = s.last_speed_setter == SpeedSetter::coincidence ? SpeedMode::track : SpeedMode::explore;
    return cmd;
}

namespace {

// Regular spike times at `rate` Hz with the given phase offset, over [0, duration).
std::vector<double> regular_train(double rate, double phase, double duration) {
    std::vector<double> t;
    if (rate <= 0.0) return t;
    for (double x = phase; x < duration; x += 1.0 / rate) t.push_back(x);
    return t;
}

struct ProbeRun {
    int spikes = 0;
    int empty_windows = 0;
};

ProbeRun run_probe(const LifParams& lif, const SynapseKernelParams& ck, const SynapseKernelParams& dk, double wc,
                   double wd, double bias, double comparator_rate, double detector_rate, const CoincidenceProbe& probe) {
    const auto comp = regular_train(comparator_rate, 0.013, probe.duration);
    const auto det = regular_train(detector_rate, 0.037, probe.duration);
    SynapseTrace tc(ck, probe.dt), td(dk, probe.dt);
    LifState v = LifState::at_rest(lif);
    const auto steps = static_cast<long>(std::llround(probe.duration / probe.dt));
    const int windows = static_cast<int>(std::floor(probe.duration));
    std::vector<int> per_window(static_cast<std::size_t>(std::max(windows, 1)), 0);
    std::size_t ic = 0, id = 0;
    ProbeRun out;
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k + 1) * probe.dt;
        v = lif_step(v, lif, bias, wc * tc.current() + wd * td.current(), probe.dt);
        tc.advance();
        td.advance();
        while (ic < comp.size() && comp[ic] <= t) {
            tc.on_spike();
            ++ic;
        }
        while (id < det.size() && det[id] <= t) {
            td.on_spike();
            ++id;
        }
        if (v.spiked_now) {
            ++out.spikes;
            const auto w = static_cast<std::size_t>(t);
            if (w < per_window.size()) ++per_window[w];
        }
    }
    for (int n : per_window)
        if (n == 0) ++out.empty_windows;
    return out;
}

} // namespace

ProbeOutcome probe_coincidence(const LifParams& lif, const SynapseKernelParams& comparator_kernel,
                               const SynapseKernelParams& detector_kernel, double w_comparator, double w_detector,
                               double bias, const CoincidenceProbe& probe) {
    ProbeOutcome o;
    o.single_comparator_spikes =
        run_probe(lif, comparator_kernel, detector_kernel, w_comparator, w_detector, bias, probe.comparator_rate, 0.0, probe)
            .spikes;
    o.single_detector_spikes =
        run_probe(lif, comparator_kernel, detector_kernel, w_comparator, w_detector, bias, 0.0, probe.detector_max_rate, probe)
            .spikes;
    const auto dual = run_probe(lif, comparator_kernel, detector_kernel, w_comparator, w_detector, bias,
                                probe.comparator_rate, probe.detector_min_rate, probe);
    o.dual_spikes = dual.spikes;
    o.dual_empty_windows = dual.empty_windows;
    return o;
}

double calibrate_coincidence_bias(const LifParams& lif, const SynapseKernelParams& comparator_kernel,
                                  const SynapseKernelParams& detector_kernel, double w_comparator, double w_detector,
                                  const CoincidenceProbe& probe) {
    // Search range scales with the neuron's rheobase.
    const double span = 20.0 * lif.rheobase();
    const auto single_fires = [&](double b) {
        const auto o = probe_coincidence(lif, comparator_kernel, detector_kernel, w_comparator, w_detector, b, probe);
        return o.single_comparator_spikes > 0 || o.single_detector_spikes > 0;
    };
    const auto dual_fires = [&](double b) {
        const auto o = probe_coincidence(lif, comparator_kernel, detector_kernel, w_comparator, w_detector, b, probe);
        return o.dual_empty_windows == 0;
    };
    if (single_fires(-span)) throw calibration_error("calibrate_coincidence_bias: single input fires at any bias");
    if (!dual_fires(0.0)) throw calibration_error("calibrate_coincidence_bias: paired inputs never fire");

    // Upper edge: least negative bias at which single inputs stay silent.
    double lo = -span, hi = 0.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (single_fires(mid) ? hi : lo) = mid;
    }
    const double upper = lo;
    // Lower edge: most negative bias at which paired inputs still fire every second.
    lo = -span;
    hi = 0.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dual_fires(mid) ? hi : lo) = mid;
    }
    const double lower = hi;
    if (!(lower < upper))
        throw calibration_error("calibrate_coincidence_bias: no bias separates single from paired inputs");
    return 0.5 * (lower + upper);
}

} // namespace wormnav
