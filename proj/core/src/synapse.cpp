#include "wormnav/synapse.hpp"

#include <stdexcept>
#include <string>

#include "wormnav/errors.hpp"

namespace wormnav {

double SynapseKernelParams::peak_time() const {
    return (tau_slow * tau_fast / (tau_slow - tau_fast)) * std::log(tau_slow / tau_fast) * 1e-3;
}

void SynapseKernelParams::validate(const char* name) const {
    const std::string n(name);
    if (!(tau_fast > 0.0)) throw config_error(n + ".tau_fast", "must be positive");
    if (!(tau_slow > tau_fast)) throw config_error(n + ".tau_slow", "must exceed tau_fast");
    if (!(peak_scale > 0.0)) throw config_error(n + ".peak_scale", "must be positive");
}

SpikeTrain::SpikeTrain(std::vector<double> times) : times_(std::move(times)) {
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("SpikeTrain: times must be strictly increasing");
}

void SpikeTrain::push(double t) {
    if (!times_.empty() && !(t > times_.back())) throw std::invalid_argument("SpikeTrain: times must be strictly increasing");
    times_.push_back(t);
}

void SpikeTrain::prune(double t, double window) {
    std::size_t keep = 0;
    while (keep < times_.size() && times_[keep] < t - window) ++keep;
    times_.erase(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(keep));
}

double kernel_value(const SynapseKernelParams& kernel, double elapsed) {
    if (elapsed < 0.0) return 0.0;
    const double ms = elapsed * 1e3;
    return kernel.peak_scale * (std::exp(-ms / kernel.tau_slow) - std::exp(-ms / kernel.tau_fast));
}

double synapse_current(const SynapseKernelParams& kernel, double weight, const SpikeTrain& presyn, double t) {
    if (!std::isfinite(weight) || !std::isfinite(t)) throw invalid_state_error("synapse_current: non-finite input");
    const double window = kernel.history_window();
    double sum = 0.0;
    for (double tk : presyn.times()) {
        const double elapsed = t - tk;
        if (elapsed > window) continue;
        sum += kernel_value(kernel, elapsed);
    }
    return weight * sum;
}

SynapseTrace::SynapseTrace(const SynapseKernelParams& kernel, double dt)
    : peak_scale_(kernel.peak_scale),
      slow_decay_(std::exp(-dt * 1e3 / kernel.tau_slow)),
      fast_decay_(std::exp(-dt * 1e3 / kernel.tau_fast)) {}

} // namespace wormnav
