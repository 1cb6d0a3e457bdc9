#include "opto_spring/errors.hpp"

#include <cstdio>

namespace opto_spring {

namespace {

std::string with_det(const std::string& where, std::complex<double> d) {
    char buf[128];
    std::snprintf(buf, sizeof buf, " (determinant %.6g%+.6gi)", d.real(), d.imag());
    return "parametric oscillation threshold reached in " + where + buf;
}

std::string with_freq(const std::string& what, double w) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " at %.9g Hz", w / 6.283185307179586);
    return what + buf;
}

std::string with_line(int line, const std::string& msg) {
    if (line <= 0) return msg;
    return "line " + std::to_string(line) + ": " + msg;
}

}  // namespace

ThresholdError::ThresholdError(const std::string& where, std::complex<double> determinant)
    : Error(with_det(where, determinant)), determinant_(determinant) {}

PoleError::PoleError(const std::string& what, double resonance_rad_s)
    : Error(with_freq(what, resonance_rad_s)), resonance_(resonance_rad_s) {}

ConfigError::ConfigError(int line, const std::string& message)
    : Error(with_line(line, message)), line_(line) {}

}  // namespace opto_spring
