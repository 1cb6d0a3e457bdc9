#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace opto_spring {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range argument.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A cavity round-trip operator became singular: the parametric amplifier
/// (or the compound arm/SE resonance) sits at or above oscillation threshold.
class ThresholdError : public Error {
public:
    ThresholdError(const std::string& where, std::complex<double> determinant);
    std::complex<double> determinant() const noexcept { return determinant_; }

private:
    std::complex<double> determinant_;
};

/// Evaluation exactly on a pole of a response function.
class PoleError : public Error {
public:
    PoleError(const std::string& what, double resonance_rad_s);
    double resonance() const noexcept { return resonance_; }

private:
    double resonance_;
};

/// Perturbative resonances requested beyond the critical power, where they
/// have merged into a complex pair.
class BeyondCriticalError : public Error {
public:
    using Error::Error;
};

/// The homodyne projection carries no signal (H^T Z = 0).
class BlindQuadratureError : public Error {
public:
    using Error::Error;
};

/// A result violates a structural invariant (e.g. negative power spectrum).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration. `line` is 0 when no single line is at fault.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace opto_spring
