// Acceptance checks. Run with no argument for all criteria, or with a
// criterion number. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "opto_spring/plant.hpp"
#include "opto_spring/readout.hpp"
#include "opto_spring/single_mode.hpp"
#include "oracles.hpp"

using namespace opto_spring;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::vector<double> theta_grid(int n) {
    std::vector<double> t(n);
    for (int j = 0; j < n; ++j) t[j] = -0.5 * kPi + kPi * j / n;
    return t;
}

SingleModeParams fig3_mode(const PlantParams& base, double ratio) {
    return reduce(calibrate(base, fixtures::kFig3Detuning, ratio));
}

// 1. argmax of the mechanical resonance over the squeeze angle
Outcome c1_quarter_turn_maximum() {
    constexpr int n = 721;
    const double step = kPi / n;
    const auto thetas = theta_grid(n);
    double worst = 0.0;
    for (const PlantParams& base : {fixtures::narrow_plant(), fixtures::broad_plant()}) {
        for (double ratio : {0.3, 0.6, 0.93}) {
            SingleModeParams sm = fig3_mode(base, ratio);
            int best = 0;
            double best_w = -1.0;
            for (int j = 0; j < n; ++j) {
                sm.theta = thetas[j];
                const double w = mode_frequencies(sm).omega_minus;
                if (w > best_w) {
                    best_w = w;
                    best = j;
                }
            }
            worst = std::max(worst, std::abs(thetas[best] + kPi / 4) / step);
        }
    }
    return {worst <= 1.0, fmt("argmax within %.3g grid steps of -pi/4 (6 curves, limit 1)", worst)};
}

// 2. decoupling where Gamma sin 2 theta = delta
Outcome c2_decoupling() {
    constexpr int n = 72001;
    const auto thetas = theta_grid(n);
    SingleModeParams sm = fig3_mode(fixtures::broad_plant(), 0.93);
    // largest change of Gamma sin 2 theta between neighbouring grid points
    const double resolution = 2.0 * std::abs(sm.Gamma) * std::sin(kPi / n);
    std::vector<double> w(n);
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            SingleModeParams s = sm;
            for (int j = static_cast<int>(t); j < n; j += static_cast<int>(workers)) {
                s.theta = thetas[j];
                w[j] = mode_frequencies(s).omega_minus;
            }
        });
    for (auto& th : pool) th.join();

    int cells = 0;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        if (std::abs(sm.Gamma * std::sin(2 * thetas[j]) - sm.delta) < resolution) {
            ++cells;
            worst = std::max(worst, rad_s_to_hz(w[j]));
        }
    }
    return {cells > 0 && worst < 1.0,
            fmt("%d cells on the decoupling line (Gamma/delta = %.3f), max Omega_-/2pi = %.3g Hz (limit 1 Hz)", cells,
                sm.Gamma / sm.delta, worst)};
}

// 3. resonances merge at the critical power
Outcome c3_critical_power() {
    double worst_pert = 0.0, worst_roots = 0.0;
    for (double ratio : {0.0, 0.3, 0.6, 0.93}) {
        for (double theta : {-kPi / 4, 0.0, 0.3}) {
            SingleModeParams sm = fig3_mode(fixtures::narrow_plant(), ratio);
            sm.theta = theta;
            const double de = std::sqrt(sm.delta * sm.delta - sm.Gamma * sm.Gamma);
            const double lever = sm.delta - sm.Gamma * std::sin(2 * theta);
            sm.J = de * de * de * de / (4 * lever);  // J_eff = delta_eff^3 / 4
            const Resonances pert = resonances_perturbative(effective(sm));
            worst_pert = std::max(worst_pert, std::abs(pert.omega_minus - pert.omega_plus) / pert.omega_plus);
            sm.gamma = 0.0;
            const Roots4 r = char_roots(sm);
            const Resonances q = mode_frequencies(r);
            worst_roots = std::max(worst_roots, std::abs(q.omega_minus - q.omega_plus) / q.omega_plus);
            for (const cplx& z : r)
                worst_roots = std::max(worst_roots, std::abs(std::abs(z) - de / std::sqrt(2.0)) / (de / std::sqrt(2.0)));
        }
    }
    return {worst_pert < 1e-6 && worst_roots < 1e-6,
            fmt("perturbative split %.3g, quartic split %.3g (limit 1e-6)", worst_pert, worst_roots)};
}

// 4. quartic roots against an independent companion-matrix QR solver
Outcome c4_quartic_oracle() {
    auto g = oracle::rng(4004);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SingleModeParams sm;
        sm.gamma = std::pow(10.0, oracle::uniform(g, -1, 3.5));
        sm.delta = oracle::uniform(g, -1, 1) * std::pow(10.0, oracle::uniform(g, 1, 4));
        sm.Gamma = oracle::uniform(g, -1.5, 1.5) * std::hypot(sm.gamma, sm.delta);
        sm.J = std::pow(10.0, oracle::uniform(g, 0, 12));
        sm.theta = oracle::uniform(g, -kPi / 2, kPi / 2);
        const auto c = char_polynomial(sm);
        const Roots4 ref = oracle::companion_qr({c[0], c[1], c[2], c[3]});
        worst = std::max(worst, oracle::root_set_distance(char_roots(sm), ref));
    }
    return {worst < 1e-9, fmt("max per-root relative deviation %.3g over 1000 sets (limit 1e-9)", worst)};
}

// 5. full-model rigidity against the single-mode formula
Outcome c5_single_mode_agreement() {
    auto g = oracle::rng(5005);
    std::vector<double> err;
    int drawn = 0;
    double worst_t = 0.0;
    while (err.size() < 100) {
        ++drawn;
        const auto d = fixtures::single_mode_draw(g, 0.2, 0.1);
        if (!d) continue;
        const cplx kf = radiation_pressure(d->plant, d->Omega, CarrierField::from_plant(d->plant)).K_full;
        const cplx ks = rigidity(d->Omega, reduce(d->plant));
        const double e = std::abs(kf - ks) / std::abs(ks);
        if (err.empty() || e > *std::max_element(err.begin(), err.end()))
            worst_t = std::max(d->plant.T_i, d->plant.T_e);
        err.push_back(e);
    }
    std::vector<double> s = err;
    std::sort(s.begin(), s.end());
    return {s.back() < 1e-3, fmt("100 configs (%d drawn): median %.3g, p90 %.3g, max %.3g at T=%.3f (limit 1e-3)", drawn,
                                 s[49], s[89], s.back(), worst_t)};
}

// 6. passive unitarity
Outcome c6_unitarity() {
    auto g = oracle::rng(6006);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        PlantParams p = fixtures::lossless(oracle::uniform(g, 0.001, 0.99), oracle::uniform(g, 0.0, 0.99),
                                           oracle::uniform(g, 0.0, 1.0));
        p.phi = oracle::uniform(g, -kPi, kPi);
        p.varphi = oracle::uniform(g, -kPi, kPi);
        p.theta = oracle::uniform(g, -kPi, kPi);
        p.delta_a = oracle::uniform(g, -kPi, kPi) / p.tau_a();
        const double w = kTwoPi * oracle::uniform(g, 10, 5000);
        const IoMaps io = io_maps(p, w, CarrierField::from_plant(p));
        const Mat2 u = io.R * io.R.adjoint() + io.T * io.T.adjoint() - Mat2::Identity();
        worst = std::max(worst, u.cwiseAbs().maxCoeff());
    }
    return {worst < 1e-9, fmt("max |RR^+ + TT^+ - I| = %.3g over 200 draws (limit 1e-9)", worst)};
}

struct SpectrumStats {
    int points = 0;
    double worst_cs = 0.0;  // most negative (S_xx S_FF - |S_xF|^2) / (S_xx S_FF)
    bool nonnegative = true;
};

void accumulate(SpectrumStats& st, const Spectrum& s) {
    for (const SpectrumPoint& pt : s) {
        ++st.points;
        const double prod = pt.noise.S_xx * pt.noise.S_FF;
        const double gap = prod - std::norm(pt.noise.S_xF);
        if (prod > 0) st.worst_cs = std::min(st.worst_cs, gap / prod);
        if (gap < -1e-12 * prod || !(pt.noise.S_xx > 0) || pt.noise.S_FF < 0) st.worst_cs = std::min(st.worst_cs, -1.0);
        if (!(pt.S_x >= 0.0) || !(pt.S_h >= 0.0)) st.nonnegative = false;
    }
}

// 7. Cauchy-Schwarz and positivity on every spectrum
Outcome c7_cauchy_schwarz() {
    SpectrumStats st;
    const auto grid = log_frequency_grid(10, 5000, 600);
    for (double theta : {-kPi / 4, -0.3, 0.0, 0.3, 0.6}) {
        for (const PlantParams& base : {fixtures::narrow_plant(), fixtures::broad_plant()}) {
            PlantParams p = calibrate(base, fixtures::kFig3Detuning, 0.93);
            p.theta = theta;
            accumulate(st, compute_spectrum(p, grid));
        }
    }
    auto g = oracle::rng(7007);
    int runs = 0;
    while (runs < 20) {
        const auto d = fixtures::single_mode_draw(g, 0.2, 0.1);
        if (!d) continue;
        ReadoutOptions opt;
        opt.mode = HomodyneMode::fixed;
        opt.zeta = oracle::uniform(g, 0, kPi);
        try {
            accumulate(st, compute_spectrum(d->plant, log_frequency_grid(10, 5000, 60), opt));
        } catch (const BlindQuadratureError&) {
            continue;
        }
        ++runs;
    }
    return {st.worst_cs >= -1e-12 && st.nonnegative,
            fmt("%d points in 30 spectra: min normalised gap %.3g (limit -1e-12), S_x, S_h >= 0: %s", st.points,
                st.worst_cs, st.nonnegative ? "yes" : "no")};
}

// 8. strain-sensitivity dips follow the mechanical resonance
Outcome c8_fig4_dips() {
    const auto grid = log_frequency_grid(10, 5000, 600);
    const double angles[] = {0.0, 0.3, 0.6};
    std::vector<double> dips;
    double worst_steps = 0.0;
    std::string listing;
    for (double theta : angles) {
        PlantParams p = calibrate(fixtures::narrow_plant(), fixtures::kFig3Detuning, 0.93);
        p.theta = theta;
        const Spectrum s = compute_spectrum(p, grid);
        std::size_t best = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i].S_h < s[best].S_h) best = i;
        const double dip = rad_s_to_hz(grid[best]);
        const double target = rad_s_to_hz(mode_frequencies(reduce(p)).omega_minus);
        const double lo = rad_s_to_hz(grid[best] - grid[best > 0 ? best - 1 : 0]);
        const double hi = rad_s_to_hz(grid[std::min(best + 1, grid.size() - 1)] - grid[best]);
        const double step = std::abs(dip - target) <= 0 ? 1.0 : (dip > target ? lo : hi);
        worst_steps = std::max(worst_steps, std::abs(dip - target) / step);
        dips.push_back(dip);
        listing += fmt(" %.1f/%.1f", dip, target);
    }
    double min_sep = INFINITY;
    for (std::size_t i = 0; i < dips.size(); ++i)
        for (std::size_t j = i + 1; j < dips.size(); ++j) min_sep = std::min(min_sep, std::abs(dips[i] - dips[j]));
    return {worst_steps <= 1.0 && min_sep > 10.0,
            fmt("dip/Omega_- [Hz]:%s; worst offset %.2f steps (limit 1), min separation %.1f Hz (limit 10)",
                listing.c_str(), worst_steps, min_sep)};
}

// 9. zero gain reproduces the ordinary detuned signal-recycling spring
Outcome c9_zero_gain_regression() {
    auto g = oracle::rng(9009);
    double worst = 0.0;
    std::vector<PlantParams> plants;
    plants.push_back(calibrate(fixtures::narrow_plant(), fixtures::kFig3Detuning, 0.0));
    plants.push_back(calibrate(fixtures::broad_plant(), fixtures::kFig3Detuning, 0.0));
    for (int i = 0; i < 200; ++i) {
        PlantParams p = fixtures::lossless(oracle::uniform(g, 0.001, 0.2), oracle::uniform(g, 0.0, 0.05),
                                           oracle::uniform(g, 0.05, 1.0));
        p.phi = oracle::uniform(g, -kPi / 2, kPi / 2);
        p.varphi = oracle::uniform(g, -kPi / 2, kPi / 2);
        p.theta = oracle::uniform(g, -kPi / 2, kPi / 2);
        p.delta_a = oracle::uniform(g, -1e3, 1e3);
        plants.push_back(p);
    }
    for (const PlantParams& p : plants) {
        const auto sr = oracle::conventional_sr(p.T_i, p.T_e, p.R_s, p.phi, p.varphi, p.delta_a, p.L);
        const double J = 4 * p.omega * p.I_c / (p.m * oracle::c_light * p.L);
        const SingleModeParams sm = reduce(p);
        for (double f : {0.0, 10.0, 100.0, 580.0, 5000.0}) {
            const cplx want = oracle::conventional_spring(p.m, J, sr, kTwoPi * f);
            worst = std::max(worst, std::abs(rigidity(kTwoPi * f, sm) - want) / std::abs(want));
        }
    }
    return {worst < 1e-12, fmt("max relative deviation %.3g over %zu plants x 5 frequencies (limit 1e-12)", worst,
                               plants.size())};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit_s;  // <= 0: none
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"theta = -pi/4 maximum", c1_quarter_turn_maximum, 1.0},
        {"decoupling condition", c2_decoupling, 1.0},
        {"critical power", c3_critical_power, 0.0},
        {"quartic-root oracle", c4_quartic_oracle, 5.0},
        {"single-mode vs full rigidity", c5_single_mode_agreement, 10.0},
        {"passive unitarity", c6_unitarity, 0.0},
        {"spectral Cauchy-Schwarz", c7_cauchy_schwarz, 0.0},
        {"strain-sensitivity dips", c8_fig4_dips, 30.0},
        {"zero-gain regression", c9_zero_gain_regression, 0.0},
    };

    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(all.size())) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        which.push_back(k);
    }
    if (which.empty())
        for (int k = 1; k <= static_cast<int>(all.size()); ++k) which.push_back(k);

    int failed = 0;
    for (int k : which) {
        const Criterion& c = all[k - 1];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass;
        std::string timing = fmt("%.2f s", dt);
        if (c.time_limit_s > 0) {
            timing += fmt(" (limit %.0f s)", c.time_limit_s);
            if (dt >= c.time_limit_s) pass = false;
        }
        std::printf("%s  %d. %s: %s [%s]\n", pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str(), timing.c_str());
        failed += !pass;
    }
    std::fflush(stdout);
    return failed ? 1 : 0;
}
