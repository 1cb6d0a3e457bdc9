#include "opto_spring/readout.hpp"

#include <cmath>
#include <limits>

#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"
#include "parallel.hpp"

namespace opto_spring {

namespace {

// Everything at one Omega that does not depend on the homodyne angle.
struct FrequencyState {
    IoMaps io;
    RadiationPressure rp;
};

FrequencyState frequency_state(const PlantParams& p, const SecMatrices& sec, double Omega,
                               const CarrierField& E) {
    return {io_maps(p, sec, Omega, E), radiation_pressure(p, sec, Omega, E)};
}

ReadoutCoefficients project(const FrequencyState& st, double zeta) {
    Eigen::RowVector2cd H;
    H << std::cos(zeta), std::sin(zeta);
    const cplx hz = (H * st.io.Z)(0);
    const double zn = st.io.Z.norm();
    if (zn == 0.0 || !(std::abs(hz) > 1e-12 * zn))
        throw BlindQuadratureError("homodyne quadrature carries no displacement signal");

    ReadoutCoefficients rc;
    rc.h_a = -(H * st.io.R) / hz;
    rc.h_v = (H * st.io.T) / hz;
    rc.f_a = st.rp.F_fl_a;
    rc.f_v = st.rp.F_fl_v;
    rc.K = st.rp.K_full;
    return rc;
}

double strain_factor(double m, double L, double Omega, cplx chi) {
    const double w2 = Omega * Omega;
    return 4.0 / (m * m * L * L * w2 * w2 * std::norm(chi));
}

}  // namespace

ReadoutCoefficients readout_coefficients(const PlantParams& p, const SecMatrices& sec, double Omega,
                                         double zeta, const CarrierField& E) {
    return project(frequency_state(p, sec, Omega, E), zeta);
}

NoiseTerms noise_terms(const ReadoutCoefficients& rc) {
    NoiseTerms nt;
    nt.S_xx = rc.h_a.squaredNorm() + rc.h_v.squaredNorm();
    nt.S_FF = rc.f_a.squaredNorm() + rc.f_v.squaredNorm();
    nt.S_xF = (rc.h_a.array() * rc.f_a.array().conjugate()).sum() +
              (rc.h_v.array() * rc.f_v.array().conjugate()).sum();
    return nt;
}

NoiseTerms noise_terms(const PlantParams& p, double Omega, double zeta) {
    p.validate();
    return noise_terms(readout_coefficients(p, sec_matrices(p), Omega, zeta, CarrierField::from_plant(p)));
}

double displacement_spectrum(const NoiseTerms& nt, cplx chi_eff) {
    const double cross = 2.0 * (std::conj(chi_eff) * nt.S_xF).real();
    const double ba = std::norm(chi_eff) * nt.S_FF;
    const double sx = nt.S_xx + cross + ba;
    if (sx < 0.0) {
        const double scale = nt.S_xx + std::abs(cross) + ba;
        if (sx < -1e-12 * scale)
            throw ConsistencyError("negative displacement spectrum; spectra violate Cauchy-Schwarz");
        return 0.0;
    }
    return sx;
}

double strain_spectrum(double S_x, double m, double L, double Omega, cplx chi_eff) {
    if (Omega == 0.0 || !std::isfinite(Omega)) throw DomainError("strain spectrum needs a finite Omega != 0");
    if (chi_eff == cplx(0.0)) throw DomainError("strain spectrum needs a non-zero susceptibility");
    return S_x * strain_factor(m, L, Omega, chi_eff);
}

double wrap_homodyne(double zeta) {
    double z = std::fmod(zeta, kPi);
    if (z < 0.0) z += kPi;
    if (z >= kPi) z = 0.0;
    return z;
}

namespace {

double optimal_zeta(const FrequencyState& st, cplx chi, const std::function<double(double)>& extra,
                    double Omega) {
    const double add = extra ? extra(Omega) : 0.0;
    auto cost = [&](double z) {
        try {
            NoiseTerms nt = noise_terms(project(st, z));
            nt.S_FF += add;
            return displacement_spectrum(nt, chi);
        } catch (const BlindQuadratureError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    constexpr int coarse = 180;
    const double h = kPi / coarse;
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < coarse; ++i) {
        const double c = cost(i * h);
        if (c < best_cost) {
            best_cost = c;
            best = i;
        }
    }
    if (best < 0) throw BlindQuadratureError("every homodyne quadrature is blind to the signal");

    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = (best - 1) * h, b = (best + 1) * h;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = cost(x1), f2 = cost(x2);
    while (b - a > 1e-4) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - g * (b - a); f1 = cost(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + g * (b - a); f2 = cost(x2);
        }
    }
    const double z = 0.5 * (a + b);
    return cost(z) <= best_cost ? wrap_homodyne(z) : wrap_homodyne(best * h);
}

SpectrumPoint evaluate(const PlantParams& p, const SecMatrices& sec, const CarrierField& E, double Omega,
                       const ReadoutOptions& opt) {
    const FrequencyState st = frequency_state(p, sec, Omega, E);
    SpectrumPoint pt;
    pt.Omega = Omega;
    pt.K = st.rp.K_full;
    pt.chi_eff = effective_susceptibility(p.m, Omega, pt.K);
    pt.zeta = opt.mode == HomodyneMode::optimal
                  ? optimal_zeta(st, pt.chi_eff, opt.extra_force_psd, Omega)
                  : wrap_homodyne(opt.zeta);
    pt.noise = noise_terms(project(st, pt.zeta));
    if (opt.extra_force_psd) {
        const double extra = opt.extra_force_psd(Omega);
        if (!(extra >= 0.0)) throw DomainError("extra force PSD must be non-negative");
        pt.noise.S_FF += extra;
    }
    pt.S_x = displacement_spectrum(pt.noise, pt.chi_eff);
    pt.S_h = strain_spectrum(pt.S_x, p.m, p.L, Omega, pt.chi_eff);
    return pt;
}

}  // namespace

SpectrumPoint spectrum_point(const PlantParams& p, const SecMatrices& sec, double Omega,
                             const ReadoutOptions& opt) {
    if (!std::isfinite(Omega) || Omega <= 0.0) throw DomainError("spectrum frequency must be positive");
    return evaluate(p, sec, CarrierField::from_plant(p), Omega, opt);
}

double optimize_homodyne(const PlantParams& p, double Omega) {
    p.validate();
    const SecMatrices sec = sec_matrices(p);
    const FrequencyState st = frequency_state(p, sec, Omega, CarrierField::from_plant(p));
    return optimal_zeta(st, effective_susceptibility(p.m, Omega, st.rp.K_full), {}, Omega);
}

Spectrum compute_spectrum(const PlantParams& p, const std::vector<double>& Omegas, const ReadoutOptions& opt) {
    p.validate();
    for (std::size_t i = 0; i < Omegas.size(); ++i) {
        if (!std::isfinite(Omegas[i]) || Omegas[i] <= 0.0)
            throw DomainError("frequency grid must be finite and positive");
        if (i > 0 && !(Omegas[i] > Omegas[i - 1]))
            throw DomainError("frequency grid must be strictly increasing");
    }
    if (opt.mode == HomodyneMode::fixed && !std::isfinite(opt.zeta))
        throw DomainError("homodyne angle must be finite");

    const SecMatrices sec = sec_matrices(p);
    const CarrierField E = CarrierField::from_plant(p);
    Spectrum out(Omegas.size());
    detail::parallel_for(Omegas.size(), opt.threads,
                         [&](std::size_t i) { out[i] = evaluate(p, sec, E, Omegas[i], opt); });
    return out;
}

std::vector<double> log_frequency_grid(double f_min_hz, double f_max_hz, int points) {
    if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz) || !std::isfinite(f_max_hz))
        throw DomainError("log grid needs 0 < f_min < f_max");
    if (points < 2) throw DomainError("grid needs at least two points");
    std::vector<double> w(points);
    const double a = std::log(f_min_hz), b = std::log(f_max_hz);
    for (int i = 0; i < points; ++i)
        w[i] = kTwoPi * std::exp(a + (b - a) * i / (points - 1));
    w.front() = kTwoPi * f_min_hz;
    w.back() = kTwoPi * f_max_hz;
    return w;
}

std::vector<double> linear_frequency_grid(double f_min_hz, double f_max_hz, int points) {
    if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz) || !std::isfinite(f_max_hz))
        throw DomainError("linear grid needs 0 < f_min < f_max");
    if (points < 2) throw DomainError("grid needs at least two points");
    std::vector<double> w(points);
    for (int i = 0; i < points; ++i) w[i] = kTwoPi * (f_min_hz + (f_max_hz - f_min_hz) * i / (points - 1));
    return w;
}

}  // namespace opto_spring
