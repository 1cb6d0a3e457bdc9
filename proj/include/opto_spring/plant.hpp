#pragma once

// Full two-photon transfer-matrix model of the signal-extraction cavity
// (with the parametric amplifier inside) coupled to the arm cavity.

#include "opto_spring/two_photon.hpp"

namespace opto_spring {

struct PlantParams {
    // amplitude reflectivities / transmissivities
    double R_s = 0.0, T_s = 1.0;   // signal-extraction mirror
    double R_i = 1.0, T_i = 0.0;   // effective input mirror
    double R_e = 1.0, T_e = 0.0;   // effective end mirror

    double phi = 0.0;      // SE phase before the crystal [rad]
    double varphi = 0.0;   // SE phase after the crystal [rad]
    double theta = 0.0;    // squeeze angle [rad]
    double q = 0.0;        // single-pass squeeze factor

    double delta_a = 0.0;  // arm detuning [rad/s]
    double L = 0.0;        // arm length [m]
    double m = 0.0;        // mirror mass [kg]
    double omega = 0.0;    // carrier angular frequency [rad/s]
    double I_c = 0.0;      // circulating arm power [W]

    double tau_a() const;  // L / c
    double k() const;      // omega / c

    /// Throws DomainError for non-finite fields, out-of-range or non-lossless
    /// mirror pairs (tolerance 1e-12 on R^2 + T^2 - 1), and non-positive
    /// L, m or omega. Negative power is rejected too.
    void validate() const;
};

/// Builds the mirror pairs of a lossless mirror from its transmissivity.
struct LosslessMirror {
    double R, T;
    static LosslessMirror from_transmissivity(double T);
};

/// Classical carrier incident on the end mirror, along the cosine quadrature.
struct CarrierField {
    Eigen::Vector2d E = Eigen::Vector2d::Zero();

    /// E = (sqrt(2 I_c / (hbar omega)), 0).
    static CarrierField from_power(double I_c, double omega);
    static CarrierField from_plant(const PlantParams& p) { return from_power(p.I_c, p.omega); }
};

struct SecMatrices {
    Mat2 D_b, D_d, R_b, R_d, T_b, T_d;
};

/// Arm round-trip pieces at one sideband frequency.
struct ArmMatrices {
    Mat2 O;      // rotation(delta_a * tau_a)
    Mat2 D_c, D_e;
    cplx e1, e2; // exp(i Omega tau_a) and its square
};

struct IoMaps {
    Mat2 R, T;
    QuadVector Z;  // [1/m]
};

struct RadiationPressure {
    Eigen::RowVector2cd F_fl_a;  // force per unit input field a [N]
    Eigen::RowVector2cd F_fl_v;  // force per unit end-port field v [N]
    cplx K_full;                 // rigidity [N/m]
};

/// Solves the SE cavity. Throws ThresholdError when I + R_i R_s M M is singular.
SecMatrices sec_matrices(const PlantParams& p);

ArmMatrices arm_matrices(const PlantParams& p, const SecMatrices& sec, double Omega);

/// b = -R a + T v + Z x_-.
IoMaps io_maps(const PlantParams& p, double Omega, const CarrierField& E);
IoMaps io_maps(const PlantParams& p, const SecMatrices& sec, double Omega, const CarrierField& E);

/// Back-action on the end mirror, F = F_fl_a a + F_fl_v v - K_full x_-.
RadiationPressure radiation_pressure(const PlantParams& p, double Omega, const CarrierField& E);
RadiationPressure radiation_pressure(const PlantParams& p, const SecMatrices& sec, double Omega,
                                     const CarrierField& E);

/// chi^-1 of a free mass, -m Omega^2.
inline double free_mass_inverse_susceptibility(double m, double Omega) { return -m * Omega * Omega; }

/// 1 / (chi_inv + K). Throws PoleError if the sum vanishes exactly.
cplx effective_susceptibility(cplx chi_inv, cplx K);

/// Overload that also names the pole frequency sqrt(Re K / m) in the error.
cplx effective_susceptibility(double m, double Omega, cplx K);

struct SingleModeValidity {
    double detuning_phase;   // |delta_a| tau_a
    double frequency_phase;  // |Omega| tau_a
    bool detuning_ok;
    bool frequency_ok;
    bool transmissivity_ok;  // T_i, T_e <= threshold
};

/// Reports, without enforcing, how deep the plant is in the single-mode regime.
SingleModeValidity single_mode_validity(const PlantParams& p, double Omega, double threshold = 0.1);

}  // namespace opto_spring
