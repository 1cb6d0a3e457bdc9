#include "opto_spring/plant.hpp"

#include <cmath>
#include <string>

#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"

namespace opto_spring {

namespace {

constexpr double kSingularDet = 1e-12;
constexpr double kLosslessTol = 1e-12;

Mat2 checked_inverse(const Mat2& m, const char* where) {
    const cplx d = determinant(m);
    if (!(std::abs(d) >= kSingularDet)) throw ThresholdError(where, d);
    return adjugate(m) / d;
}

void check_mirror(double R, double T, const char* name) {
    if (!std::isfinite(R) || !std::isfinite(T))
        throw DomainError(std::string(name) + " mirror coefficients must be finite");
    if (R < 0.0 || R > 1.0 || T < 0.0 || T > 1.0)
        throw DomainError(std::string(name) + " mirror coefficients must lie in [0, 1]");
    if (std::abs(R * R + T * T - 1.0) > kLosslessTol)
        throw DomainError(std::string(name) + " mirror is not lossless (R^2 + T^2 != 1)");
}

}  // namespace

double PlantParams::tau_a() const { return L / kSpeedOfLight; }
double PlantParams::k() const { return omega / kSpeedOfLight; }

void PlantParams::validate() const {
    check_mirror(R_s, T_s, "signal-extraction");
    check_mirror(R_i, T_i, "input");
    check_mirror(R_e, T_e, "end");
    for (double v : {phi, varphi, theta, q, delta_a, L, m, omega, I_c})
        if (!std::isfinite(v)) throw DomainError("plant parameters must be finite");
    if (L <= 0.0) throw DomainError("arm length must be positive");
    if (m <= 0.0) throw DomainError("mirror mass must be positive");
    if (omega <= 0.0) throw DomainError("carrier frequency must be positive");
    if (I_c < 0.0) throw DomainError("circulating power must be non-negative");
}

LosslessMirror LosslessMirror::from_transmissivity(double T) {
    if (!std::isfinite(T) || T < 0.0 || T > 1.0)
        throw DomainError("transmissivity must lie in [0, 1]");
    return {std::sqrt(1.0 - T * T), T};
}

CarrierField CarrierField::from_power(double I_c, double omega) {
    if (!std::isfinite(I_c) || I_c < 0.0) throw DomainError("carrier power must be non-negative");
    if (!std::isfinite(omega) || omega <= 0.0) throw DomainError("carrier frequency must be positive");
    CarrierField f;
    f.E(0) = std::sqrt(2.0 * I_c / (kHbar * omega));
    return f;
}

SecMatrices sec_matrices(const PlantParams& p) {
    const Mat2 I = Mat2::Identity();
    const Mat2 m_pv = m_cavity(p.phi, p.varphi, p.theta, p.q);   // M[phi, varphi]
    const Mat2 m_vp = m_cavity(p.varphi, p.phi, p.theta, p.q);   // M[varphi, phi]
    const double rr = p.R_i * p.R_s;

    SecMatrices s;
    s.D_b = checked_inverse(I + rr * m_vp * m_pv, "signal-extraction cavity (D_b)");
    s.D_d = checked_inverse(I + rr * m_pv * m_vp, "signal-extraction cavity (D_d)");
    s.R_b = p.R_s * I + p.R_i * p.T_s * p.T_s * m_pv * s.D_b * m_vp;
    s.R_d = p.R_i * I + p.R_s * p.T_i * p.T_i * m_vp * s.D_d * m_pv;
    s.T_b = p.T_i * p.T_s * m_pv * s.D_b;
    s.T_d = p.T_i * p.T_s * m_vp * s.D_d;
    return s;
}

ArmMatrices arm_matrices(const PlantParams& p, const SecMatrices& sec, double Omega) {
    if (!std::isfinite(Omega)) throw DomainError("sideband frequency must be finite");
    const double tau = p.tau_a();
    const Mat2 I = Mat2::Identity();

    ArmMatrices a;
    a.O = rotation(p.delta_a * tau);
    a.e1 = std::polar(1.0, Omega * tau);
    a.e2 = std::polar(1.0, 2.0 * Omega * tau);
    a.D_c = checked_inverse(I - p.R_e * a.e2 * (a.O * a.O * sec.R_d), "arm cavity (D_c)");
    a.D_e = checked_inverse(I - p.R_e * a.e2 * (a.O * sec.R_d * a.O), "arm cavity (D_e)");
    return a;
}

IoMaps io_maps(const PlantParams& p, double Omega, const CarrierField& E) {
    return io_maps(p, sec_matrices(p), Omega, E);
}

IoMaps io_maps(const PlantParams& p, const SecMatrices& sec, double Omega, const CarrierField& E) {
    const ArmMatrices a = arm_matrices(p, sec, Omega);
    const Mat2 TbDcO = sec.T_b * a.D_c * a.O;
    const QuadVector e = E.E.cast<cplx>();

    IoMaps out;
    out.R = sec.R_b - p.R_e * a.e2 * (TbDcO * a.O * sec.T_d);
    out.T = p.T_e * a.e1 * TbDcO;
    out.Z = (2.0 * p.k() * a.e1) * (TbDcO * quarter_turn() * e);
    return out;
}

RadiationPressure radiation_pressure(const PlantParams& p, double Omega, const CarrierField& E) {
    return radiation_pressure(p, sec_matrices(p), Omega, E);
}

RadiationPressure radiation_pressure(const PlantParams& p, const SecMatrices& sec, double Omega,
                                     const CarrierField& E) {
    const ArmMatrices a = arm_matrices(p, sec, Omega);
    const double k = p.k();
    const Eigen::RowVector2cd et = E.E.cast<cplx>().transpose();
    const Eigen::RowVector2cd eDeO = et * a.D_e * a.O;
    const Eigen::RowVector2cd eDeORdO = eDeO * sec.R_d * a.O;

    RadiationPressure r;
    r.F_fl_a = (2.0 * kHbar * k * a.e1) * (eDeO * sec.T_d);
    r.F_fl_v = (2.0 * kHbar * k * p.T_e * a.e2) * eDeORdO;
    r.K_full = -4.0 * kHbar * k * k * a.e2 * (eDeORdO * quarter_turn() * E.E.cast<cplx>())(0);
    return r;
}

cplx effective_susceptibility(cplx chi_inv, cplx K) {
    const cplx s = chi_inv + K;
    if (s == cplx(0.0)) throw PoleError("effective susceptibility has a pole", 0.0);
    return 1.0 / s;
}

cplx effective_susceptibility(double m, double Omega, cplx K) {
    const cplx s = free_mass_inverse_susceptibility(m, Omega) + K;
    if (s == cplx(0.0)) throw PoleError("effective susceptibility has a pole", std::abs(Omega));
    return 1.0 / s;
}

SingleModeValidity single_mode_validity(const PlantParams& p, double Omega, double threshold) {
    SingleModeValidity v;
    v.detuning_phase = std::abs(p.delta_a) * p.tau_a();
    v.frequency_phase = std::abs(Omega) * p.tau_a();
    v.detuning_ok = v.detuning_phase < threshold;
    v.frequency_ok = v.frequency_phase < threshold;
    v.transmissivity_ok = p.T_i <= threshold && p.T_e <= threshold;
    return v;
}

}  // namespace opto_spring
