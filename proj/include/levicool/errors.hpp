#ifndef LEVICOOL_ERRORS_HPP
#define LEVICOOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace levicool {

// Thrown when a drift matrix has an eigenvalue with non-negative real part
// (anti-damped configuration, no steady state).
class InstabilityError : public std::runtime_error {
public:
    explicit InstabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Nonlinear fit did not converge or the data cannot support the model.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Position calibration against an antinode reference failed.
class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Config file rejected; message names the offending field and unit.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace levicool

#endif
