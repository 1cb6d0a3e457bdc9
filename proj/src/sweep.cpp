#include "opto_spring/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"
#include "opto_spring/single_mode.hpp"
#include "parallel.hpp"

namespace opto_spring {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> theta_grid(int n) {
    std::vector<double> t(n);
    for (int j = 0; j < n; ++j) t[j] = -0.5 * kPi + kPi * j / n;
    return t;
}

void plant_meta(SweepResult& r, const PlantParams& p) {
    const SingleModeParams sm = reduce(p);
    r.meta.emplace_back("squeeze_factor", format_number(p.q));
    r.meta.emplace_back("squeeze_angle_rad", format_number(p.theta));
    r.meta.emplace_back("arm_detuning_hz", format_number(rad_s_to_hz(p.delta_a)));
    r.meta.emplace_back("detuning_hz", format_number(rad_s_to_hz(sm.delta)));
    r.meta.emplace_back("linewidth_hz", format_number(rad_s_to_hz(sm.gamma)));
    r.meta.emplace_back("gain_over_threshold", format_number(sm.Gamma / std::hypot(sm.gamma, sm.delta)));
    r.meta.emplace_back("normalised_power_rad3_s3", format_number(sm.J));
}

ReadoutOptions readout_options(const RunConfig& cfg) {
    ReadoutOptions o;
    o.mode = cfg.homodyne;
    o.zeta = cfg.homodyne_angle;
    return o;
}

}  // namespace

void SweepResult::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ConsistencyError("row width does not match the column count");
    rows.push_back(std::move(row));
}

bool SweepResult::row_has_nan(std::size_t i) const {
    for (const Cell& c : rows.at(i))
        if (const double* d = std::get_if<double>(&c); d && std::isnan(*d)) return true;
    return false;
}

SweepResult run_spectrum(const RunConfig& cfg) {
    SweepResult r;
    r.sweep = "spectrum";
    r.columns = {{"freq_hz", "Hz"},     {"zeta", "rad"},  {"S_xx", "m^2/Hz"}, {"S_FF", "N^2/Hz"},
                 {"S_xF_re", "m N/Hz"}, {"S_xF_im", "m N/Hz"}, {"K_re", "N/m"}, {"K_im", "N/m"},
                 {"chi_re", "m/N"},     {"chi_im", "m/N"}, {"S_x", "m^2/Hz"},  {"S_h", "1/Hz"},
                 {"sqrt_S_h", "1/sqrt(Hz)"}};
    plant_meta(r, cfg.plant);
    r.meta.emplace_back("homodyne", cfg.homodyne == HomodyneMode::optimal ? "optimal" : "fixed");

    const std::vector<double> grid = cfg.frequency_grid();
    const SecMatrices sec = sec_matrices(cfg.plant);
    const ReadoutOptions opt = readout_options(cfg);
    std::vector<std::vector<Cell>> rows(grid.size());
    std::vector<char> failed(grid.size(), 0);
    detail::parallel_for(grid.size(), 0, [&](std::size_t i) {
        const double f = rad_s_to_hz(grid[i]);
        try {
            const SpectrumPoint pt = spectrum_point(cfg.plant, sec, grid[i], opt);
            rows[i] = {f, pt.zeta, pt.noise.S_xx, pt.noise.S_FF, pt.noise.S_xF.real(), pt.noise.S_xF.imag(),
                       pt.K.real(), pt.K.imag(), pt.chi_eff.real(), pt.chi_eff.imag(), pt.S_x, pt.S_h,
                       std::sqrt(pt.S_h)};
        } catch (const Error&) {
            failed[i] = 1;
            rows[i] = {f, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
        }
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        r.row_errors += failed[i];
        r.add_row(std::move(rows[i]));
    }
    return r;
}

SweepResult run_theta_sweep(const RunConfig& cfg) {
    if (cfg.gain_ratios.empty()) throw ConfigError(0, "theta sweep needs 'gain_ratios'");
    SweepResult r;
    r.sweep = "theta_sweep";
    r.columns = {{"theta_rad", "rad"},     {"gain_ratio", ""},     {"omega_minus_hz", "Hz"},
                 {"omega_plus_hz", "Hz"},  {"j_eff_over_j", ""},   {"imaginary_delta_eff", ""},
                 {"unstable", ""},         {"below_threshold", ""}, {"status", ""}};

    const double target = cfg.calibrated ? cfg.target_delta : reduce(cfg.plant).delta;
    r.meta.emplace_back("detuning_hz", format_number(rad_s_to_hz(target)));
    r.meta.emplace_back("theta_points", std::to_string(cfg.theta_points));

    const std::vector<double> thetas = theta_grid(cfg.theta_points);
    const std::size_t nt = thetas.size();
    std::vector<std::vector<Cell>> rows(cfg.gain_ratios.size() * nt);
    std::vector<char> failed(rows.size(), 0);

    for (std::size_t g = 0; g < cfg.gain_ratios.size(); ++g) {
        const double ratio = cfg.gain_ratios[g];
        SingleModeParams sm;
        std::string status = "ok";
        double q = kNaN;
        try {
            const PlantParams p = calibrate(cfg.plant, target, ratio);
            q = p.q;
            sm = reduce(p);
        } catch (const Error&) {
            status = ratio >= 1.0 ? "above_threshold" : "unreachable_gain";
        }
        r.meta.emplace_back("gain_ratio_" + std::to_string(g), format_number(ratio));
        r.meta.emplace_back("squeeze_factor_" + std::to_string(g), format_number(q));

        detail::parallel_for(nt, 0, [&, sm, status](std::size_t j) {
            const std::size_t row = g * nt + j;
            const double th = thetas[j];
            if (status != "ok") {
                failed[row] = 1;
                rows[row] = {th, ratio, kNaN, kNaN, kNaN, false, false, false, status};
                return;
            }
            SingleModeParams s = sm;
            s.theta = th;
            try {
                const StabilityReport rep = stability(s);
                const Resonances res = mode_frequencies(rep.roots);
                const EffectiveParams ep = effective(s);
                const double jr = ep.delta_eff > 0.0 ? (s.delta - s.Gamma * std::sin(2.0 * th)) / ep.delta_eff : kNaN;
                rows[row] = {th, ratio, rad_s_to_hz(res.omega_minus), rad_s_to_hz(res.omega_plus), jr,
                             ep.imaginary_delta_eff, rep.unstable, rep.below_threshold, std::string("ok")};
            } catch (const Error&) {
                failed[row] = 1;
                rows[row] = {th, ratio, kNaN, kNaN, kNaN, false, false, false, std::string("error")};
            }
        });
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        r.row_errors += failed[i];
        r.add_row(std::move(rows[i]));
    }
    return r;
}

SweepResult run_angle_compare(const RunConfig& cfg) {
    if (cfg.angle_list.empty()) throw ConfigError(0, "angle comparison needs 'angle_list_deg'");
    SweepResult r;
    r.sweep = "angle_compare";
    r.columns = {{"freq_hz", "Hz"}};
    for (std::size_t a = 0; a < cfg.angle_list.size(); ++a)
        r.columns.push_back({"S_h_" + std::to_string(a), "1/Hz"});
    plant_meta(r, cfg.plant);

    const std::vector<double> grid = cfg.frequency_grid();
    const ReadoutOptions opt = readout_options(cfg);
    std::vector<std::vector<double>> sh(cfg.angle_list.size(), std::vector<double>(grid.size(), kNaN));
    std::vector<char> failed(grid.size(), 0);

    for (std::size_t a = 0; a < cfg.angle_list.size(); ++a) {
        PlantParams p = cfg.plant;
        p.theta = cfg.angle_list[a];
        const SecMatrices sec = sec_matrices(p);
        detail::parallel_for(grid.size(), 0, [&](std::size_t i) {
            try {
                sh[a][i] = spectrum_point(p, sec, grid[i], opt).S_h;
            } catch (const Error&) {
                failed[i] = 1;
            }
        });

        std::size_t best = grid.size();
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (!std::isnan(sh[a][i]) && (best == grid.size() || sh[a][i] < sh[a][best])) best = i;
        SingleModeParams sm = reduce(p);
        const std::string tag = std::to_string(a);
        r.meta.emplace_back("theta_" + tag + "_rad", format_number(p.theta));
        r.meta.emplace_back("dip_" + tag + "_hz", best < grid.size() ? format_number(rad_s_to_hz(grid[best])) : "nan");
        r.meta.emplace_back("omega_minus_" + tag + "_hz",
                            format_number(rad_s_to_hz(mode_frequencies(sm).omega_minus)));
    }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{rad_s_to_hz(grid[i])};
        for (const auto& col : sh) row.emplace_back(col[i]);
        r.row_errors += failed[i];
        r.add_row(std::move(row));
    }
    return r;
}

SweepResult run_stability_map(const RunConfig& cfg) {
    SweepResult r;
    r.sweep = "stability_map";
    r.columns = {{"gain_ratio", ""}, {"theta_rad", "rad"}, {"gamma_th_hz", "Hz"}, {"unstable", ""},
                 {"below_threshold", ""}, {"max_growth_rate", "1/s"}};
    for (int k = 0; k < 4; ++k) {
        r.columns.push_back({"root" + std::to_string(k) + "_re_hz", "Hz"});
        r.columns.push_back({"root" + std::to_string(k) + "_im_hz", "Hz"});
    }

    // Linewidth, detuning and power are those of the configured plant; only
    // the gain is scaled across the map, so cells above threshold are allowed.
    const SingleModeParams base = reduce(cfg.plant);
    const double gth = std::hypot(base.gamma, base.delta);
    r.meta.emplace_back("detuning_hz", format_number(rad_s_to_hz(base.delta)));
    r.meta.emplace_back("linewidth_hz", format_number(rad_s_to_hz(base.gamma)));
    r.meta.emplace_back("normalised_power_rad3_s3", format_number(base.J));

    const int ng = cfg.map_gain_ratio_points;
    const std::vector<double> thetas = theta_grid(cfg.map_theta_points);
    const std::size_t nt = thetas.size();
    std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(ng) * nt);
    std::vector<char> failed(rows.size(), 0);
    detail::parallel_for(rows.size(), 0, [&](std::size_t idx) {
        const std::size_t g = idx / nt, j = idx % nt;
        const double ratio = ng == 1 ? cfg.map_gain_ratio_min
                                     : cfg.map_gain_ratio_min +
                                           (cfg.map_gain_ratio_max - cfg.map_gain_ratio_min) * g / (ng - 1);
        SingleModeParams s = base;
        s.Gamma = ratio * gth;
        s.theta = thetas[j];
        std::vector<Cell> row{ratio, s.theta, rad_s_to_hz(gth)};
        try {
            const StabilityReport rep = stability(s);
            row.insert(row.end(), {rep.unstable, rep.below_threshold, rep.max_growth_rate});
            for (const cplx& z : rep.roots) {
                row.emplace_back(rad_s_to_hz(z.real()));
                row.emplace_back(rad_s_to_hz(z.imag()));
            }
        } catch (const Error&) {
            failed[idx] = 1;
            row.insert(row.end(), {false, false, kNaN});
            for (int k = 0; k < 8; ++k) row.emplace_back(kNaN);
        }
        rows[idx] = std::move(row);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        r.row_errors += failed[i];
        r.add_row(std::move(rows[i]));
    }
    return r;
}

SweepResult run_sweep(const RunConfig& cfg) {
    switch (cfg.sweep) {
        case SweepKind::spectrum: return run_spectrum(cfg);
        case SweepKind::theta_sweep: return run_theta_sweep(cfg);
        case SweepKind::angle_compare: return run_angle_compare(cfg);
        case SweepKind::stability_map: return run_stability_map(cfg);
    }
    throw ConsistencyError("unhandled sweep kind");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string cell_text(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) return format_number(*d);
    if (const bool* b = std::get_if<bool>(&c)) return *b ? "1" : "0";
    return std::get<std::string>(c);
}

int count_skipped(const SweepResult& r, const WriteOptions& opt) {
    if (opt.allow_nan) return 0;
    int n = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) n += r.row_has_nan(i);
    return n;
}

}  // namespace

int write_csv(const SweepResult& r, std::ostream& os, const WriteOptions& opt) {
    const int skipped = count_skipped(r, opt);
    os << "# opto-spring " << kVersion << '\n';
    os << "# sweep: " << r.sweep << '\n';
    if (!opt.timestamp.empty()) os << "# generated: " << opt.timestamp << '\n';
    for (const auto& [k, v] : r.meta) os << "# " << k << ": " << v << '\n';
    os << "# columns:";
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        os << (c ? ", " : " ") << r.columns[c].name;
        if (!r.columns[c].unit.empty()) os << " [" << r.columns[c].unit << ']';
    }
    os << '\n';
    os << "# skipped_rows: " << skipped << '\n';

    for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << r.columns[c].name;
    os << '\n';
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (!opt.allow_nan && r.row_has_nan(i)) continue;
        for (std::size_t c = 0; c < r.rows[i].size(); ++c) os << (c ? "," : "") << cell_text(r.rows[i][c]);
        os << '\n';
    }
    return skipped;
}

int write_json(const SweepResult& r, std::ostream& os, const WriteOptions& opt) {
    using nlohmann::json;
    const int skipped = count_skipped(r, opt);

    json meta = json::object();
    meta["version"] = std::string(kVersion);
    meta["sweep"] = r.sweep;
    if (!opt.timestamp.empty()) meta["generated"] = opt.timestamp;
    json cols = json::array();
    for (const Column& c : r.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    meta["columns"] = cols;
    meta["skipped_rows"] = skipped;
    for (const auto& [k, v] : r.meta) meta[k] = v;

    json rows = json::array();
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (!opt.allow_nan && r.row_has_nan(i)) continue;
        json row = json::object();
        for (std::size_t c = 0; c < r.columns.size(); ++c)
            std::visit([&](const auto& v) { row[r.columns[c].name] = v; }, r.rows[i][c]);
        rows.push_back(std::move(row));
    }
    os << json{{"meta", meta}, {"rows", rows}}.dump(2) << '\n';
    return skipped;
}

}  // namespace opto_spring
