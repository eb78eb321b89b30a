#pragma once

#include <stdexcept>
#include <string>

namespace wormnav {

// Raised when a state or input carries non-finite values.
struct invalid_state_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Configuration problems. `field` names the offending entry so tools can
// report it in a machine-readable form.
class config_error : public std::runtime_error {
public:
    config_error(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Calibration search found no parameter value satisfying its constraints.
struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wormnav
