#pragma once

// Synthetic-input probes of the decision neurons, shared by the unit tests
// and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wormnav/lif.hpp"
#include "wormnav/network.hpp"
#include "wormnav/synapse.hpp"

namespace wormnav::harness {

// Spikes at `rate` Hz over [start, stop) with a random phase and +-10% ISI jitter.
inline std::vector<double> jittered_train(double rate, double start, double stop, std::mt19937_64& rng) {
    std::vector<double> t;
    if (rate <= 0.0 || stop <= start) return t;
    const double isi = 1.0 / rate;
    std::uniform_real_distribution<double> phase(0.0, isi), jitter(-0.1 * isi, 0.1 * isi);
    for (double x = start + phase(rng); x < stop; x += isi) t.push_back(std::clamp(x + jitter(rng), start, stop));
    std::sort(t.begin(), t.end());
    return t;
}

struct DecisionInputs {
    std::vector<double> comparator;  // N1 (or N2) spike times [s]
    std::vector<double> detector;    // N3 (or N4) spike times [s]
};

// Drives one decision neuron from synthetic presynaptic trains and returns
// its spike times. `explorer` selects N7 wiring (w17, w37, bias7), otherwise
// N5 wiring (w15, w35, bias5).
inline std::vector<double> drive_decision_neuron(const NetworkConfig& cfg, const DecisionInputs& in, double duration,
                                                 bool explorer, double dt = 1e-3) {
    const LifParams& lif = explorer ? cfg.explorer_lif : cfg.coincidence_lif;
    const double wc = explorer ? cfg.weights.w17 : cfg.weights.w15;
    const double wd = explorer ? cfg.weights.w37 : cfg.weights.w35;
    const double bias = explorer ? cfg.bias7 : cfg.bias5;
    SynapseTrace tc(cfg.comparator_kernel, dt), td(cfg.detector_kernel, dt);
    LifState v = LifState::at_rest(lif);
    std::size_t ic = 0, id = 0;
    std::vector<double> out;
    const long steps = std::lround(duration / dt);
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k + 1) * dt;
        v = lif_step(v, lif, bias, wc * tc.current() + wd * td.current(), dt);
        tc.advance();
        td.advance();
        for (; ic < in.comparator.size() && in.comparator[ic] <= t; ++ic) tc.on_spike();
        for (; id < in.detector.size() && in.detector[id] <= t; ++id) td.on_spike();
        if (v.spiked_now) out.push_back(t);
    }
    return out;
}

struct GateTally {
    int single_trials = 0;
    int false_positives = 0;
    int dual_trials = 0;
    int detections = 0;
};

// Randomised 10 s episodes for the coincidence detector: single-input
// episodes must stay silent, paired episodes with >= 1 s overlap must fire.
inline GateTally coincidence_episodes(const NetworkConfig& cfg, int episodes, std::uint64_t seed) {
    const CoincidenceProbe probe;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GateTally tally;
    for (int e = 0; e < episodes; ++e) {
        const double det_rate = probe.detector_min_rate + u(rng) * (probe.detector_max_rate - probe.detector_min_rate);
        DecisionInputs in;
        const int kind = e % 3;  // 0 comparator only, 1 detector only, 2 both
        if (kind == 0) {
            in.comparator = jittered_train(probe.comparator_rate, 10.0 * u(rng) * 0.5, 10.0, rng);
        } else if (kind == 1) {
            in.detector = jittered_train(det_rate, 10.0 * u(rng) * 0.5, 10.0, rng);
        } else {
            const double overlap = 1.0 + 4.0 * u(rng);
            const double start = u(rng) * (9.0 - overlap);
            in.comparator = jittered_train(probe.comparator_rate, start * u(rng), start + overlap + u(rng), rng);
            in.detector = jittered_train(det_rate, start, start + overlap, rng);
        }
        const auto spikes = drive_decision_neuron(cfg, in, 10.0, false);
        if (kind == 2) {
            ++tally.dual_trials;
            if (!spikes.empty()) ++tally.detections;
        } else {
            ++tally.single_trials;
            if (!spikes.empty()) ++tally.false_positives;
        }
    }
    return tally;
}

// Smallest detector rate that keeps N7 silent for 10 s while the comparator
// fires at its nominal rate (inhibition dominates). Bisection finds the rate
// for a regular train; jittered trains can leave gaps of 1.2 ISI, so the
// returned rate is scaled by 1.2 to cover them.
inline double explorer_gate_rate(const NetworkConfig& cfg) {
    const CoincidenceProbe probe;
    const auto silent = [&](double rate) {
        DecisionInputs in;
        for (double t = 0.013; t < 10.0; t += 1.0 / probe.comparator_rate) in.comparator.push_back(t);
        for (double t = 0.003; t < 10.0; t += 1.0 / rate) in.detector.push_back(t);
        return drive_decision_neuron(cfg, in, 10.0, true).empty();
    };
    double lo = 0.1, hi = 200.0;
    if (!silent(hi)) return hi;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        (silent(mid) ? hi : lo) = mid;
    }
    return 1.2 * hi;
}

struct ExplorerTally {
    int free_trials = 0;
    int free_late = 0;       // N7 failed to spike within 2 s of comparator onset
    int gated_trials = 0;
    int gated_spiking = 0;   // N7 spiked despite sustained detector activity
};

// Randomised episodes for the explorer: comparator alone must elicit N7
// within 2 s, comparator plus a jittered detector at or above the gate rate
// must keep it silent.
inline ExplorerTally explorer_episodes(const NetworkConfig& cfg, int episodes, std::uint64_t seed, double gate_rate) {
    const CoincidenceProbe probe;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ExplorerTally tally;
    for (int e = 0; e < episodes; ++e) {
        const double onset = 5.0 * u(rng);
        DecisionInputs in;
        in.comparator = jittered_train(probe.comparator_rate, onset, 10.0, rng);
        if (e % 2 == 0) {
            ++tally.free_trials;
            const auto spikes = drive_decision_neuron(cfg, in, 10.0, true);
            const double first_input = in.comparator.empty() ? onset : in.comparator.front();
            if (spikes.empty() || spikes.front() - first_input > 2.0) ++tally.free_late;
        } else {
            ++tally.gated_trials;
            const double rate = gate_rate * (1.0 + u(rng));
            in.detector = jittered_train(rate, 0.0, 10.0, rng);
            if (!drive_decision_neuron(cfg, in, 10.0, true).empty()) ++tally.gated_spiking;
        }
    }
    return tally;
}

} // namespace wormnav::harness
