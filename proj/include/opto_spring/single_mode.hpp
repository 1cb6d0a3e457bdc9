#pragma once

// Analytic single-mode model: the arm + SE cavity collapsed to one optical
// mode with linewidth gamma, detuning delta and parametric gain Gamma.

#include <array>

#include "opto_spring/plant.hpp"
#include "opto_spring/two_photon.hpp"

namespace opto_spring {

struct SingleModeParams {
    double gamma_a = 0.0;  // arm half-linewidth, c (T_i^2 + T_e^2) / 4L  [rad/s]
    double gamma_i = 0.0;  // input-mirror share of gamma_a               [rad/s]
    double gamma = 0.0;    // effective linewidth                          [rad/s]
    double delta_s = 0.0;  // detuning induced by the SE cavity            [rad/s]
    double delta_a = 0.0;  // arm detuning                                 [rad/s]
    double delta = 0.0;    // delta_a + delta_s                            [rad/s]
    double Gamma = 0.0;    // parametric gain                              [rad/s]
    double D0 = 1.0;
    double J = 0.0;        // 4 omega I_c / (m c L)                        [rad^3/s^3]
    double theta = 0.0;    // squeeze angle                                [rad]
    double m = 0.0;        // mirror mass                                  [kg]

    /// J (delta - Gamma sin 2 theta), the constant term of the quartic.
    double coupling() const;
};

struct EffectiveParams {
    double delta_eff = 0.0;  // |sqrt(delta^2 - Gamma^2)|
    double J_eff = 0.0;      // J (delta - Gamma sin 2 theta) / delta_eff
    // Set when Gamma > delta; delta_eff then holds the modulus of the
    // imaginary root and J_eff is computed with that modulus.
    bool imaginary_delta_eff = false;
};

using Roots4 = std::array<cplx, 4>;

struct StabilityReport {
    Roots4 roots;
    bool unstable = false;        // any root with Im > 0 (e^{-i Omega t} convention)
    double max_growth_rate = 0.0; // largest Im of the roots [1/s]
    double Gamma_th = 0.0;        // sqrt(gamma^2 + delta^2)
    bool below_threshold = false; // |Gamma| < Gamma_th
};

/// Mechanical (minus) and optical (plus) resonance frequencies in rad/s.
struct Resonances {
    double omega_minus = 0.0;
    double omega_plus = 0.0;
};

/// Taylor reduction of the full plant. Throws DomainError if D0 <= 0.
SingleModeParams reduce(const PlantParams& p);

EffectiveParams effective(double delta, double Gamma, double theta, double J);
inline EffectiveParams effective(const SingleModeParams& sm) {
    return effective(sm.delta, sm.Gamma, sm.theta, sm.J);
}

/// K(Omega) = m J (delta - Gamma sin 2 theta) / ((gamma - i Omega)^2 + delta^2 - Gamma^2).
cplx rigidity(double Omega, const SingleModeParams& sm);

/// Coefficients {c0..c4} of the characteristic quartic, c4 = 1.
std::array<cplx, 5> char_polynomial(const SingleModeParams& sm);

/// Roots of a monic quartic with coefficients {c0, c1, c2, c3}.
Roots4 quartic_roots(const std::array<cplx, 4>& lower);

/// The four characteristic frequencies, ordered by increasing modulus.
Roots4 char_roots(const SingleModeParams& sm);

/// Lossless-limit resonances from delta_eff and J_eff. Throws
/// BeyondCriticalError above J_eff^(c) = delta_eff^3 / 4 and DomainError when
/// delta_eff is not real and positive or J_eff is negative.
Resonances resonances_perturbative(const EffectiveParams& ep);

/// Resonances read off the characteristic roots: the two roots of smallest
/// modulus form the mechanical mode, the other two the optical one; each
/// frequency is the largest |Re| within its pair.
Resonances mode_frequencies(const SingleModeParams& sm);
Resonances mode_frequencies(const Roots4& roots_by_modulus);

StabilityReport stability(const SingleModeParams& sm);

/// Picks q and delta_a so that the reduced plant has detuning `target_delta`
/// and Gamma / Gamma_th = `gain_ratio`. Other fields of `p` are kept. Throws
/// DomainError if the gain ratio cannot be reached before D0 vanishes.
PlantParams calibrate(PlantParams p, double target_delta, double gain_ratio);

}  // namespace opto_spring
