#include "opto_spring/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "opto_spring/config.hpp"
#include "opto_spring/constants.hpp"
#include "opto_spring/errors.hpp"
#include "opto_spring/single_mode.hpp"
#include "opto_spring/sweep.hpp"

namespace opto_spring {

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string format;
    bool allow_nan = false;
};

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_summary(const RunConfig& cfg, std::ostream& out) {
    const SingleModeParams sm = reduce(cfg.plant);
    const StabilityReport rep = stability(sm);
    out << "config ok (sweep " << to_string(cfg.sweep) << ")\n"
        << "  detuning          " << format_number(rad_s_to_hz(sm.delta)) << " Hz\n"
        << "  linewidth         " << format_number(rad_s_to_hz(sm.gamma)) << " Hz\n"
        << "  parametric gain   " << format_number(rad_s_to_hz(sm.Gamma)) << " Hz\n"
        << "  gain / threshold  " << format_number(sm.Gamma / rep.Gamma_th) << '\n'
        << "  squeeze factor    " << format_number(cfg.plant.q) << '\n'
        << "  arm detuning      " << format_number(rad_s_to_hz(cfg.plant.delta_a)) << " Hz\n"
        << "  D0                " << format_number(sm.D0) << '\n'
        << "  J                 " << format_number(sm.J) << " rad^3/s^3\n";
}

int run_sweep_command(SweepKind kind, const Args& a, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(a.config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    cfg.sweep = kind;
    if (!a.out.empty()) cfg.output = a.out;
    if (a.format == "json") cfg.format = OutputFormat::json;
    else if (a.format == "csv") cfg.format = OutputFormat::csv;

    SweepResult res;
    try {
        res = run_sweep(cfg);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    WriteOptions wo;
    wo.allow_nan = a.allow_nan;
    wo.timestamp = utc_timestamp();

    std::ofstream file;
    std::ostream* os = &out;
    if (!cfg.output.empty() && cfg.output != "-") {
        file.open(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << cfg.output << "'\n";
            return kExitRuntime;
        }
        os = &file;
    }
    const int skipped = cfg.format == OutputFormat::json ? write_json(res, *os, wo) : write_csv(res, *os, wo);
    os->flush();

    if (skipped > 0) err << "warning: skipped " << skipped << " rows containing NaN (use --allow-nan)\n";
    if (res.row_errors > 0) {
        err << "error: " << res.row_errors << " rows hit threshold, pole or domain errors\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optical-spring dynamics and quantum noise of a detuned interferometer with an "
                 "intra-cavity parametric amplifier",
                 "opto-spring"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Args a;
    struct Sub {
        const char* name;
        const char* help;
        SweepKind kind;
    };
    const Sub subs[] = {
        {"spectrum", "noise spectra over a frequency grid", SweepKind::spectrum},
        {"theta-sweep", "resonances versus squeeze angle", SweepKind::theta_sweep},
        {"angle-compare", "strain sensitivity for several squeeze angles", SweepKind::angle_compare},
        {"stability-map", "characteristic roots over gain and squeeze angle", SweepKind::stability_map},
    };
    for (const Sub& s : subs) {
        CLI::App* c = app.add_subcommand(s.name, s.help);
        c->add_option("--config", a.config, "run configuration file")->required();
        c->add_option("--out", a.out, "output path ('-' for stdout)");
        c->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        c->add_flag("--allow-nan", a.allow_nan, "emit rows containing NaN");
    }
    CLI::App* val = app.add_subcommand("validate", "parse a configuration and print its reduced parameters");
    val->add_option("--config", a.config, "run configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (val->parsed()) {
        try {
            print_summary(load_config(a.config), out);
        } catch (const ConfigError& e) {
            err << "config error: " << e.what() << '\n';
            return kExitConfig;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kExitRuntime;
        }
        return kExitOk;
    }
    for (const Sub& s : subs)
        if (app.get_subcommand(s.name)->parsed()) return run_sweep_command(s.kind, a, out, err);
    return kExitUsage;
}

}  // namespace opto_spring
