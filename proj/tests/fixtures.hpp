#pragma once

// Plants shared by the unit and acceptance tests.

#include <cmath>
#include <optional>
#include <random>

#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"
#include "opto_spring/plant.hpp"
#include "opto_spring/single_mode.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace opto_spring;

inline PlantParams lossless(double T_i, double T_e, double T_s) {
    PlantParams p;
    const auto mi = LosslessMirror::from_transmissivity(T_i);
    const auto me = LosslessMirror::from_transmissivity(T_e);
    const auto ms = LosslessMirror::from_transmissivity(T_s);
    p.R_i = mi.R; p.T_i = mi.T;
    p.R_e = me.R; p.T_e = me.T;
    p.R_s = ms.R; p.T_s = ms.T;
    p.L = 3995.0;
    p.m = 40.0;
    p.omega = kTwoPi * kSpeedOfLight / 1064e-9;
    p.I_c = 840e3;
    return p;
}

// Narrow-line plant of the bundled configuration: gamma / 2pi ~ 3 Hz.
inline PlantParams narrow_plant() {
    PlantParams p = lossless(0.05, std::sqrt(5e-6), 0.0447);
    p.varphi = 0.5 * (kPi - 0.2);
    return p;
}

// Broad-line plant, gamma / 2pi ~ 260 Hz, for which Gamma can exceed delta
// below threshold.
inline PlantParams broad_plant() {
    PlantParams p = lossless(0.1, std::sqrt(5e-6), 0.9);
    p.varphi = 0.5 * (kPi - 1.0);
    return p;
}

inline constexpr double kFig3Detuning = kTwoPi * 580.0;

struct Draw {
    PlantParams plant;
    double Omega;
};

// Random configuration deep in the single-mode regime, away from poles,
// from the decoupling line and from threshold. `conditioning` bounds how
// close the rigidity denominator may come to zero relative to its scale.
inline std::optional<Draw> single_mode_draw(std::mt19937_64& g, double t_max, double conditioning) {
    using oracle::uniform;
    PlantParams p = lossless(uniform(g, 0.001, t_max), uniform(g, 0.001, t_max), uniform(g, 0.05, 1.0));
    p.phi = uniform(g, -kPi / 2, kPi / 2);
    p.varphi = uniform(g, -kPi / 2, kPi / 2);
    p.theta = uniform(g, -kPi / 2, kPi / 2);
    p.q = uniform(g, 0.0, 0.5);
    const double tau = p.tau_a();
    p.delta_a = uniform(g, -1e-3, 1e-3) / tau;
    const double Omega = uniform(g, 0.0, 1e-3) / tau;

    SingleModeParams sm;
    try {
        sec_matrices(p);
        sm = reduce(p);
    } catch (const Error&) {
        return std::nullopt;
    }
    const double G = sm.Gamma, d = sm.delta, gm = sm.gamma;
    if (std::max({gm, std::abs(d), std::abs(G)}) * tau > 1e-3) return std::nullopt;
    if (std::abs(G) >= std::hypot(gm, d)) return std::nullopt;
    if (std::abs(sm.coupling()) / sm.J < 0.1 * (std::abs(d) + std::abs(G))) return std::nullopt;
    const cplx gw(gm, -Omega);
    const double den = std::abs(gw * gw + d * d - G * G);
    if (den < conditioning * (gm * gm + d * d + G * G + Omega * Omega)) return std::nullopt;
    return Draw{p, Omega};
}

}  // namespace fixtures
