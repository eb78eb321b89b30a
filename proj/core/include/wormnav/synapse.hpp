#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace wormnav {

// Double-exponential synaptic current kernel
//   I(t) = w * I_0 * sum_k [exp(-(t - t_k)/tau) - exp(-(t - t_k)/tau_s)].
struct SynapseKernelParams {
    double peak_scale = 1.0;  // I_0 [nA]
    double tau_slow = 5.0;    // tau   [ms]
    double tau_fast = 1.0;    // tau_s [ms]

    // Spikes older than this are dropped from the explicit kernel sum [s].
    double history_window() const { return 10.0 * tau_slow * 1e-3; }

    // Time after a spike at which the unit-weight kernel peaks [s].
    double peak_time() const;

    // Integral of the unit-weight kernel, I_0 * (tau - tau_s) [nA*s].
    double charge() const { return peak_scale * (tau_slow - tau_fast) * 1e-3; }

    void validate(const char* name = "kernel") const;
};

// Spike timestamps [s], strictly increasing.
class SpikeTrain {
public:
    SpikeTrain() = default;
    explicit SpikeTrain(std::vector<double> times);

    // Appends a spike; throws std::invalid_argument if not after the last one.
    void push(double t);
    // Removes spikes strictly older than `t - window`.
    void prune(double t, double window);

    std::span<const double> times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

private:
    std::vector<double> times_;
};

// Unit-weight kernel value `elapsed` seconds after a spike (zero for elapsed < 0).
double kernel_value(const SynapseKernelParams& kernel, double elapsed);

// Explicit kernel sum over the spike train evaluated at time t [s]; spikes
// beyond the history window are ignored.
double synapse_current(const SynapseKernelParams& kernel, double weight, const SpikeTrain& presyn, double t);

// Recursive form of the same kernel: two exponentially decaying traces that
// both jump by one at each presynaptic spike. Equivalent to the explicit sum
// without the history cut-off, at O(1) cost per step.
class SynapseTrace {
public:
    SynapseTrace() = default;
    SynapseTrace(const SynapseKernelParams& kernel, double dt);

    void advance() {
        slow_ *= slow_decay_;
        fast_ *= fast_decay_;
    }
    void on_spike() {
        slow_ += 1.0;
        fast_ += 1.0;
    }
    // Unit-weight current [nA]; multiply by the synaptic weight.
    double current() const { return peak_scale_ * (slow_ - fast_); }
    void reset() { slow_ = fast_ = 0.0; }

private:
    double peak_scale_ = 0.0;
    double slow_decay_ = 0.0;
    double fast_decay_ = 0.0;
    double slow_ = 0.0;
    double fast_ = 0.0;
};

} // namespace wormnav
