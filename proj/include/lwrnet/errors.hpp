#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lwrnet {

/// Density or other state outside its physical range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid scenario, config file or solver parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite or otherwise unusable solver input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A failure inside the time loop; carries the step at which it happened.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Output files could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lwrnet
