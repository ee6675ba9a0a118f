#pragma once
#include <stdexcept>
#include <string>

namespace pursuit {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evader and pursuer coincide; the pursuit direction is undefined.
struct ZeroSeparationError : Error {
    using Error::Error;
};

/// A complex state with |z| = 0 has no argument.
struct ZeroModulusError : Error {
    using Error::Error;
};

/// The circular system has no equilibrium point in this regime (n > 1).
struct NoEquilibriumError : Error {
    using Error::Error;
};

/// The requested quantity is only defined in a different speed-ratio regime.
struct InvalidRegimeError : Error {
    using Error::Error;
};

/// Dense evaluation outside the trajectory span.
struct OutOfSpanError : Error {
    using Error::Error;
};

/// Fixed-point iteration hit its iteration cap; carries the last residual.
struct MaxItersExceededError : Error {
    double last_residual;
    MaxItersExceededError(const std::string& msg, double residual)
        : Error(msg), last_residual(residual) {}
};

/// Invalid configuration, scenario or argument values.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace pursuit
