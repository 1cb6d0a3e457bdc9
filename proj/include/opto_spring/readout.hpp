#pragma once

// Balanced homodyne readout of the output port and the resulting quantum
// noise spectra, with vacuum (identity) spectral matrices on both inputs.

#include <functional>
#include <vector>

#include "opto_spring/constants.hpp"
#include "opto_spring/plant.hpp"

namespace opto_spring {

struct NoiseTerms {
    double S_xx = 0.0;  // [m^2/Hz]
    double S_FF = 0.0;  // [N^2/Hz]
    cplx S_xF = 0.0;    // [m N/Hz]
};

/// Per-frequency readout filters: the output normalised to displacement is
/// x_a a + x_v v + x_-, the back-action force is f_a a + f_v v - K x_-.
struct ReadoutCoefficients {
    Eigen::RowVector2cd h_a, h_v;
    Eigen::RowVector2cd f_a, f_v;
    cplx K = 0.0;
};

ReadoutCoefficients readout_coefficients(const PlantParams& p, const SecMatrices& sec, double Omega,
                                         double zeta, const CarrierField& E);

/// Throws BlindQuadratureError when H^T Z vanishes.
NoiseTerms noise_terms(const PlantParams& p, double Omega, double zeta);
NoiseTerms noise_terms(const ReadoutCoefficients& rc);

/// S_xx + 2 Re(chi* S_xF) + |chi|^2 S_FF, clamped at zero for round-off and
/// rejected with ConsistencyError if more negative than 1e-12 of its terms.
double displacement_spectrum(const NoiseTerms& nt, cplx chi_eff);

/// S_x * 4 / (m^2 L^2 Omega^4 |chi_eff|^2). Throws DomainError for Omega = 0.
double strain_spectrum(double S_x, double m, double L, double Omega, cplx chi_eff);

/// Homodyne angle in [0, pi) that minimises S_h at Omega: coarse scan, then
/// golden-section refinement to 1e-4 rad.
double optimize_homodyne(const PlantParams& p, double Omega);

/// Wraps an angle into [0, pi).
double wrap_homodyne(double zeta);

struct SpectrumPoint {
    double Omega = 0.0;  // [rad/s]
    double zeta = 0.0;   // [rad]
    NoiseTerms noise;
    cplx K = 0.0;        // [N/m]
    cplx chi_eff = 0.0;  // [m/N]
    double S_x = 0.0;    // [m^2/Hz]
    double S_h = 0.0;    // [1/Hz]
};

using Spectrum = std::vector<SpectrumPoint>;

enum class HomodyneMode { optimal, fixed };

struct ReadoutOptions {
    HomodyneMode mode = HomodyneMode::optimal;
    double zeta = 0.5 * kPi;  // used when mode == fixed
    // Extra force noise on the input mirror from an auxiliary readout beam,
    // as a PSD in N^2/Hz at angular frequency Omega. Added to S_FF.
    std::function<double(double)> extra_force_psd;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// One grid point of a spectrum; `sec` must come from sec_matrices(p).
SpectrumPoint spectrum_point(const PlantParams& p, const SecMatrices& sec, double Omega,
                             const ReadoutOptions& opt = {});

/// Evaluates the spectrum on a strictly increasing grid of angular frequencies.
Spectrum compute_spectrum(const PlantParams& p, const std::vector<double>& Omegas,
                          const ReadoutOptions& opt = {});

/// Logarithmic grid in Hz, returned as angular frequencies.
std::vector<double> log_frequency_grid(double f_min_hz, double f_max_hz, int points);
std::vector<double> linear_frequency_grid(double f_min_hz, double f_max_hz, int points);

}  // namespace opto_spring
