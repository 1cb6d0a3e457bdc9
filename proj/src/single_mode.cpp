#include "opto_spring/single_mode.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"

namespace opto_spring {

double SingleModeParams::coupling() const {
    return J * (delta - Gamma * std::sin(2.0 * theta));
}

SingleModeParams reduce(const PlantParams& p) {
    p.validate();
    const double c = kSpeedOfLight;
    const double ch = std::cosh(2.0 * p.q);
    const double c2p = std::cos(2.0 * p.phi), s2p = std::sin(2.0 * p.phi);
    const double c2v = std::cos(2.0 * p.varphi), s2v = std::sin(2.0 * p.varphi);

    SingleModeParams sm;
    sm.gamma_i = c * p.T_i * p.T_i / (4.0 * p.L);
    const double gamma_e = c * p.T_e * p.T_e / (4.0 * p.L);
    sm.gamma_a = sm.gamma_i + gamma_e;
    sm.D0 = 1.0 + 2.0 * p.R_s * (ch * c2p * c2v - s2p * s2v) + p.R_s * p.R_s;
    if (!(sm.D0 > 0.0))
        throw DomainError("single-mode denominator D0 is not positive; expansion invalid");

    const double g = 2.0 * sm.gamma_i * p.R_s / sm.D0;
    sm.gamma = gamma_e + sm.gamma_i * p.T_s * p.T_s / sm.D0;
    sm.delta_s = g * (ch * c2p * s2v + s2p * c2v);
    sm.Gamma = g * std::sinh(2.0 * p.q) * c2p;
    sm.delta_a = p.delta_a;
    sm.delta = p.delta_a + sm.delta_s;
    sm.J = 4.0 * p.omega * p.I_c / (p.m * c * p.L);
    sm.theta = p.theta;
    sm.m = p.m;
    return sm;
}

EffectiveParams effective(double delta, double Gamma, double theta, double J) {
    EffectiveParams ep;
    if (Gamma == 0.0) {
        ep.delta_eff = delta;
        ep.J_eff = J;
        return ep;
    }
    const double d2 = delta * delta - Gamma * Gamma;
    ep.imaginary_delta_eff = d2 < 0.0;
    ep.delta_eff = std::sqrt(std::abs(d2));
    const double jp = J * (delta - Gamma * std::sin(2.0 * theta));
    if (ep.delta_eff == 0.0) {
        if (jp != 0.0) throw DomainError("effective detuning vanishes with non-zero coupling");
        ep.J_eff = 0.0;
        return ep;
    }
    ep.J_eff = jp / ep.delta_eff;
    return ep;
}

cplx rigidity(double Omega, const SingleModeParams& sm) {
    const cplx gw(sm.gamma, -Omega);
    const cplx den = gw * gw + sm.delta * sm.delta - sm.Gamma * sm.Gamma;
    const double num = sm.m * sm.coupling();
    if (num == 0.0) return 0.0;
    if (den == cplx(0.0)) throw PoleError("optical rigidity has a pole", Omega);
    return num / den;
}

std::array<cplx, 5> char_polynomial(const SingleModeParams& sm) {
    const double g = sm.gamma;
    return {cplx(sm.coupling()), cplx(0.0),
            cplx(sm.Gamma * sm.Gamma - g * g - sm.delta * sm.delta), cplx(0.0, 2.0 * g), cplx(1.0)};
}

namespace {

cplx horner(const std::array<cplx, 4>& c, cplx z) {
    return (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0];
}

cplx horner_derivative(const std::array<cplx, 4>& c, cplx z) {
    return ((4.0 * z + 3.0 * c[3]) * z + 2.0 * c[2]) * z + c[1];
}

}  // namespace

Roots4 quartic_roots(const std::array<cplx, 4>& c) {
    for (const cplx& x : c)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw DomainError("quartic coefficients must be finite");

    // Fujiwara-type scale so the companion matrix has O(1) entries.
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s = std::max(s, std::pow(std::abs(c[k]), 1.0 / (4 - k)));
    Roots4 r{};
    if (s == 0.0) return r;

    Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
    for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1.0;
    for (int k = 0; k < 4; ++k) comp(k, 3) = -c[k] / std::pow(s, 4 - k);

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(comp, false);
    if (es.info() != Eigen::Success) throw ConsistencyError("companion eigen-solver did not converge");

    for (int i = 0; i < 4; ++i) {
        cplx z = es.eigenvalues()(i) * s;
        double pz = std::abs(horner(c, z));
        for (int it = 0; it < 4 && pz > 0.0; ++it) {
            const cplx d = horner_derivative(c, z);
            if (d == cplx(0.0)) break;
            const cplx zn = z - horner(c, z) / d;
            const double pn = std::abs(horner(c, zn));
            if (!(pn < pz)) break;
            z = zn;
            pz = pn;
        }
        r[i] = z;
    }
    return r;
}

Roots4 char_roots(const SingleModeParams& sm) {
    const auto p = char_polynomial(sm);
    Roots4 r = quartic_roots({p[0], p[1], p[2], p[3]});
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return r;
}

Resonances resonances_perturbative(const EffectiveParams& ep) {
    if (ep.imaginary_delta_eff || !(ep.delta_eff > 0.0))
        throw DomainError("perturbative resonances need a real, positive effective detuning");
    if (ep.J_eff < 0.0)
        throw DomainError("negative effective power: the optical spring is anti-restoring");
    const double d2 = ep.delta_eff * ep.delta_eff;
    const double quarter = d2 * d2 / 4.0;
    double disc = quarter - ep.J_eff * ep.delta_eff;
    if (disc < 0.0) {
        if (disc < -1e-12 * quarter)
            throw BeyondCriticalError("effective power exceeds the critical value delta_eff^3/4");
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    return {std::sqrt(std::max(0.0, d2 / 2.0 - root)), std::sqrt(d2 / 2.0 + root)};
}

Resonances mode_frequencies(const Roots4& r) {
    return {std::max(std::abs(r[0].real()), std::abs(r[1].real())),
            std::max(std::abs(r[2].real()), std::abs(r[3].real()))};
}

Resonances mode_frequencies(const SingleModeParams& sm) {
    return mode_frequencies(char_roots(sm));
}

StabilityReport stability(const SingleModeParams& sm) {
    StabilityReport rep;
    rep.roots = char_roots(sm);
    rep.max_growth_rate = rep.roots[0].imag();
    for (const cplx& z : rep.roots) rep.max_growth_rate = std::max(rep.max_growth_rate, z.imag());
    // The quartic lacks a linear term, so no choice of parameters makes it
    // Hurwitz once its constant term is non-zero.
    rep.unstable = sm.coupling() != 0.0;
    rep.Gamma_th = std::hypot(sm.gamma, sm.delta);
    rep.below_threshold = std::abs(sm.Gamma) < rep.Gamma_th;
    return rep;
}

PlantParams calibrate(PlantParams p, double target_delta, double gain_ratio) {
    if (!std::isfinite(target_delta) || !std::isfinite(gain_ratio))
        throw DomainError("calibration targets must be finite");
    if (std::abs(gain_ratio) >= 1.0)
        throw DomainError("gain ratio must lie strictly inside (-1, 1)");

    auto residual = [&](double q, bool& ok) {
        p.q = q;
        p.delta_a = 0.0;
        ok = true;
        try {
            const SingleModeParams sm = reduce(p);
            return sm.Gamma / std::hypot(sm.gamma, target_delta) - gain_ratio;
        } catch (const DomainError&) {
            ok = false;
            return 0.0;
        }
    };

    double lo = 0.0;
    if (gain_ratio != 0.0) {
        const double c2p = std::cos(2.0 * p.phi);
        if (std::abs(c2p) < 1e-12 || p.R_s == 0.0)
            throw DomainError("this SE configuration produces no parametric gain");
        const double sign = (gain_ratio > 0.0) == (c2p > 0.0) ? 1.0 : -1.0;
        const double want = gain_ratio > 0.0 ? 1.0 : -1.0;

        constexpr double step = 1e-3;
        constexpr double q_max = 10.0;
        double hi = 0.0;
        bool found = false;
        for (double q = step; q <= q_max; q += step) {
            bool ok = false;
            const double f = residual(sign * q, ok);
            if (!ok) break;
            if (f * want > 0.0) {
                hi = q;
                found = true;
                break;
            }
            lo = q;
        }
        if (!found) throw DomainError("requested gain ratio is unreachable for this SE cavity");
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            bool ok = false;
            const double f = residual(sign * mid, ok);
            if (ok && f * want <= 0.0) lo = mid; else hi = mid;
        }
        lo = sign * 0.5 * (lo + hi);
    }
    p.q = lo;
    p.delta_a = 0.0;
    const SingleModeParams sm = reduce(p);
    p.delta_a = target_delta - sm.delta_s;
    return p;
}

}  // namespace opto_spring
