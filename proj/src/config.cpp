#include "opto_spring/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"
#include "opto_spring/single_mode.hpp"

namespace opto_spring {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "arm_length_m", "mirror_mass_kg", "wavelength_m", "circulating_power_w",
    "t_input", "r_input", "t_end", "r_end", "t_se", "r_se",
    "phi_deg", "varphi_deg", "squeeze_angle_deg",
    "squeeze_factor", "arm_detuning_hz", "target_detuning_hz", "gain_ratio",
    "sweep", "freq_min_hz", "freq_max_hz", "freq_points", "freq_scale",
    "homodyne", "homodyne_angle_deg", "theta_points", "gain_ratios", "angle_list_deg",
    "map_gain_ratio_min", "map_gain_ratio_max", "map_gain_ratio_points", "map_theta_points",
    "output", "format",
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line;
};

class Entries {
public:
    explicit Entries(std::string_view text) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line_no;

            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;

            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) throw ConfigError(line_no, "missing key before '='");
            if (!kKnownKeys.count(key)) throw ConfigError(line_no, "unknown key '" + key + "'");
            if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");
            if (auto it = map_.find(key); it != map_.end())
                throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                               std::to_string(it->second.line) + ")");
            map_.emplace(key, Entry{value, line_no});
        }
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }
    int line(const std::string& key) const { return has(key) ? map_.at(key).line : 0; }

    const Entry& require(const std::string& key) const {
        auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError(0, "missing required key '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const { return parse_number(require(key), key); }

    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    int integer(const std::string& key, int fallback) const {
        if (!has(key)) return fallback;
        const Entry& e = map_.at(key);
        int v = 0;
        const char* end = e.value.data() + e.value.size();
        auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
        if (ec != std::errc() || ptr != end) throw ConfigError(e.line, "'" + key + "' must be an integer");
        return v;
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        if (!has(key)) return out;
        const Entry& e = map_.at(key);
        std::string_view rest = e.value;
        while (true) {
            const auto comma = rest.find(',');
            out.push_back(parse_number({std::string(trim(rest.substr(0, comma))), e.line}, key));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? map_.at(key).value : fallback;
    }

private:
    static double parse_number(const Entry& e, const std::string& key) {
        double v = 0.0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        if (begin != end && *begin == '+') ++begin;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            throw ConfigError(e.line, "'" + key + "' must be a finite number, got '" + e.value + "'");
        return v;
    }

    std::map<std::string, Entry, std::less<>> map_;
};

LosslessMirror mirror(const Entries& en, const std::string& suffix) {
    const std::string tk = "t_" + suffix, rk = "r_" + suffix;
    const auto t = en.optional_number(tk);
    const auto r = en.optional_number(rk);
    if (!t && !r) throw ConfigError(0, "missing required key '" + tk + "' (or '" + rk + "')");
    if (t && (*t < 0.0 || *t > 1.0))
        throw ConfigError(en.line(tk), "'" + tk + "' is an amplitude transmissivity and must lie in [0, 1]");
    if (r && (*r < 0.0 || *r > 1.0))
        throw ConfigError(en.line(rk), "'" + rk + "' is an amplitude reflectivity and must lie in [0, 1]");
    if (t && r) {
        if (std::abs(*r * *r + *t * *t - 1.0) > 1e-9)
            throw ConfigError(en.line(rk), "'" + rk + "'^2 + '" + tk + "'^2 must equal 1 for a lossless mirror");
        return LosslessMirror::from_transmissivity(*t);
    }
    if (t) return LosslessMirror::from_transmissivity(*t);
    const auto m = LosslessMirror::from_transmissivity(*r);
    return {m.T, m.R};
}

double positive(const Entries& en, const std::string& key) {
    const double v = en.number(key);
    if (!(v > 0.0)) throw ConfigError(en.line(key), "'" + key + "' must be positive");
    return v;
}

}  // namespace

const char* to_string(SweepKind k) {
    switch (k) {
        case SweepKind::spectrum: return "spectrum";
        case SweepKind::theta_sweep: return "theta_sweep";
        case SweepKind::angle_compare: return "angle_compare";
        case SweepKind::stability_map: return "stability_map";
    }
    return "?";
}

std::vector<double> RunConfig::frequency_grid() const {
    return log_frequency ? log_frequency_grid(freq_min_hz, freq_max_hz, freq_points)
                         : linear_frequency_grid(freq_min_hz, freq_max_hz, freq_points);
}

RunConfig parse_config(std::string_view text) {
    const Entries en(text);
    RunConfig cfg;
    PlantParams& p = cfg.plant;

    p.L = positive(en, "arm_length_m");
    p.m = positive(en, "mirror_mass_kg");
    p.omega = kTwoPi * kSpeedOfLight / positive(en, "wavelength_m");
    p.I_c = en.number("circulating_power_w");
    if (p.I_c < 0.0) throw ConfigError(en.line("circulating_power_w"), "circulating power must be non-negative");

    const auto mi = mirror(en, "input");
    const auto me = mirror(en, "end");
    const auto ms = mirror(en, "se");
    p.R_i = mi.R; p.T_i = mi.T;
    p.R_e = me.R; p.T_e = me.T;
    p.R_s = ms.R; p.T_s = ms.T;

    p.phi = deg_to_rad(en.number("phi_deg"));
    p.varphi = deg_to_rad(en.number("varphi_deg"));
    p.theta = deg_to_rad(en.optional_number("squeeze_angle_deg").value_or(0.0));

    const bool explicit_plant = en.has("squeeze_factor") || en.has("arm_detuning_hz");
    const bool target_plant = en.has("target_detuning_hz") || en.has("gain_ratio");
    if (explicit_plant && target_plant) {
        const int line = std::max(en.line("target_detuning_hz"), en.line("gain_ratio"));
        throw ConfigError(line, "give either squeeze_factor/arm_detuning_hz or target_detuning_hz/gain_ratio, not both");
    }
    if (target_plant) {
        cfg.calibrated = true;
        cfg.target_delta = hz_to_rad_s(en.number("target_detuning_hz"));
        cfg.gain_ratio = en.number("gain_ratio");
        try {
            p = calibrate(p, cfg.target_delta, cfg.gain_ratio);
        } catch (const DomainError& e) {
            throw ConfigError(en.line("gain_ratio"), std::string("cannot reach the requested gain: ") + e.what());
        }
    } else {
        p.q = en.number("squeeze_factor");
        p.delta_a = hz_to_rad_s(en.number("arm_detuning_hz"));
    }
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(0, e.what());
    }

    if (en.has("sweep")) {
        const std::string sw = en.text("sweep", "");
        if (sw == "spectrum") cfg.sweep = SweepKind::spectrum;
        else if (sw == "theta_sweep") cfg.sweep = SweepKind::theta_sweep;
        else if (sw == "angle_compare") cfg.sweep = SweepKind::angle_compare;
        else if (sw == "stability_map") cfg.sweep = SweepKind::stability_map;
        else throw ConfigError(en.line("sweep"), "unknown sweep '" + sw + "'");
    }

    cfg.freq_min_hz = en.optional_number("freq_min_hz").value_or(cfg.freq_min_hz);
    cfg.freq_max_hz = en.optional_number("freq_max_hz").value_or(cfg.freq_max_hz);
    cfg.freq_points = en.integer("freq_points", cfg.freq_points);
    if (!(cfg.freq_min_hz > 0.0)) throw ConfigError(en.line("freq_min_hz"), "'freq_min_hz' must be positive");
    if (!(cfg.freq_max_hz > cfg.freq_min_hz))
        throw ConfigError(en.line("freq_max_hz"), "'freq_max_hz' must exceed 'freq_min_hz'");
    if (cfg.freq_points < 2) throw ConfigError(en.line("freq_points"), "'freq_points' must be at least 2");

    const std::string scale = en.text("freq_scale", "log");
    if (scale == "log") cfg.log_frequency = true;
    else if (scale == "linear") cfg.log_frequency = false;
    else throw ConfigError(en.line("freq_scale"), "'freq_scale' must be 'log' or 'linear'");

    const std::string hom = en.text("homodyne", "optimal");
    if (hom == "optimal") cfg.homodyne = HomodyneMode::optimal;
    else if (hom == "fixed") cfg.homodyne = HomodyneMode::fixed;
    else throw ConfigError(en.line("homodyne"), "'homodyne' must be 'optimal' or 'fixed'");
    if (const auto z = en.optional_number("homodyne_angle_deg")) cfg.homodyne_angle = deg_to_rad(*z);
    else if (cfg.homodyne == HomodyneMode::fixed) en.require("homodyne_angle_deg");

    cfg.theta_points = en.integer("theta_points", cfg.theta_points);
    if (cfg.theta_points < 2) throw ConfigError(en.line("theta_points"), "'theta_points' must be at least 2");
    cfg.gain_ratios = en.list("gain_ratios");
    for (double g : cfg.gain_ratios)
        if (g < 0.0) throw ConfigError(en.line("gain_ratios"), "'gain_ratios' entries must be non-negative");
    for (double a : en.list("angle_list_deg")) cfg.angle_list.push_back(deg_to_rad(a));

    cfg.map_gain_ratio_min = en.optional_number("map_gain_ratio_min").value_or(cfg.map_gain_ratio_min);
    cfg.map_gain_ratio_max = en.optional_number("map_gain_ratio_max").value_or(cfg.map_gain_ratio_max);
    cfg.map_gain_ratio_points = en.integer("map_gain_ratio_points", cfg.map_gain_ratio_points);
    cfg.map_theta_points = en.integer("map_theta_points", cfg.map_theta_points);
    if (cfg.map_gain_ratio_min < 0.0)
        throw ConfigError(en.line("map_gain_ratio_min"), "'map_gain_ratio_min' must be non-negative");
    if (!(cfg.map_gain_ratio_max >= cfg.map_gain_ratio_min))
        throw ConfigError(en.line("map_gain_ratio_max"), "'map_gain_ratio_max' must not be below the minimum");
    if (cfg.map_gain_ratio_points < 1)
        throw ConfigError(en.line("map_gain_ratio_points"), "'map_gain_ratio_points' must be at least 1");
    if (cfg.map_theta_points < 1)
        throw ConfigError(en.line("map_theta_points"), "'map_theta_points' must be at least 1");

    switch (cfg.sweep) {
        case SweepKind::theta_sweep:
            if (cfg.gain_ratios.empty()) en.require("gain_ratios");
            break;
        case SweepKind::angle_compare:
            if (cfg.angle_list.empty()) en.require("angle_list_deg");
            break;
        default: break;
    }

    cfg.output = en.text("output", "");
    const std::string fmt = en.text("format", "csv");
    if (fmt == "csv") cfg.format = OutputFormat::csv;
    else if (fmt == "json") cfg.format = OutputFormat::json;
    else throw ConfigError(en.line("format"), "'format' must be 'csv' or 'json'");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace opto_spring
