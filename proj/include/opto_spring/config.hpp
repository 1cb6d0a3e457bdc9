#pragma once

// Run configuration: a strict `key = value` text format, '#' starts a comment.
// Frequencies are in Hz and angles in degrees at this boundary only.

#include <string>
#include <string_view>
#include <vector>

#include "opto_spring/plant.hpp"
#include "opto_spring/readout.hpp"

namespace opto_spring {

enum class SweepKind { spectrum, theta_sweep, angle_compare, stability_map };
enum class OutputFormat { csv, json };

struct RunConfig {
    PlantParams plant;  // fully resolved, radians and rad/s

    // Set when the plant was specified by target detuning and gain ratio
    // instead of squeeze factor and arm detuning.
    bool calibrated = false;
    double target_delta = 0.0;  // [rad/s]
    double gain_ratio = 0.0;    // Gamma / Gamma_th

    SweepKind sweep = SweepKind::spectrum;

    double freq_min_hz = 10.0;
    double freq_max_hz = 5000.0;
    int freq_points = 600;
    bool log_frequency = true;

    HomodyneMode homodyne = HomodyneMode::optimal;
    double homodyne_angle = 0.5 * kPi;  // [rad]

    int theta_points = 721;
    std::vector<double> gain_ratios;
    std::vector<double> angle_list;  // [rad]

    double map_gain_ratio_min = 0.0;
    double map_gain_ratio_max = 1.2;
    int map_gain_ratio_points = 25;
    int map_theta_points = 73;

    std::string output;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    std::vector<double> frequency_grid() const;  // [rad/s]
};

/// Throws ConfigError carrying the offending line (0 for a missing key).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

const char* to_string(SweepKind k);

}  // namespace opto_spring
