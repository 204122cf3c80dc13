#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncs/cli.hpp"

namespace {

int fail(ncs::ErrorKind kind, const std::string& msg) {
    nlohmann::json e{{"error", ncs::to_string(kind)}, {"message", msg}, {"exit_code", ncs::exit_code(kind)}};
    std::cerr << e.dump() << '\n';
    return ncs::exit_code(kind);
}

}  // namespace

int main(int argc, char** argv) {
    ncs::RunConfig cfg;
    bool have_command = false;

    // A config file supplies the baseline; explicit flags override it.
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        std::string path;
        if (a == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) path = a.substr(9);
        else continue;
        std::ifstream in(path);
        if (!in) return fail(ncs::ErrorKind::IoFailure, "cannot read config " + path);
        try {
            nlohmann::json j = nlohmann::json::parse(in);
            ncs::apply_config_json(j, cfg);
            have_command = have_command || (j.is_object() && j.contains("command"));
        } catch (const nlohmann::json::exception& e) {
            return fail(ncs::ErrorKind::InvalidConfig, std::string("config does not parse: ") + e.what());
        } catch (const ncs::Error& e) {
            return fail(e.kind(), e.what());
        }
    }

    CLI::App app{"Nonlinear coherent states of deformed oscillators: states, phase-space fields, measures."};
    app.set_version_flag("--version", ncs::kVersion);
    app.footer(ncs::preset_help() +
               "\nCommands: deformation, factorial-log, u-function, state, wigner, husimi, measure, convergence, figure\n"
               "Families: identity, trapped-ion (eta2 = 0 is the linear oscillator), q-oscillator, linear, "
               "series-h1, series-h2\n"
               "Default n-max: state/wigner/husimi use the truncation policy; deformation 100; factorial-log 10000;\n"
               "  measure 50 (laguerre); convergence 100000.\n"
               "Exit codes: 0 ok, 2 invalid config, 3 deformation pole, 4 divergence/overflow, 5 I/O, 6 other numerical.\n"
               "NCS_THREADS caps the worker count.");

    std::string command_text;
    std::string config_path, format_text;
    std::size_t n_max = 0;
    std::vector<double> grid_range{cfg.grid_lo, cfg.grid_hi}, r_range{cfg.r_min, cfg.r_max};

    app.add_option("command", command_text, "command to run");
    app.add_option("--config", config_path, "JSON file whose keys mirror the long flag names");
    app.add_option("--family", cfg.family, "deformation family")->capture_default_str();
    app.add_option("--eta2", cfg.eta2, "Lamb-Dicke parameter squared")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "q-oscillator parameter")->capture_default_str();
    app.add_option("--series-order", cfg.series_order, "truncated series order (1..3)")->capture_default_str();
    app.add_option("--alpha-re", cfg.alpha_re, "Re alpha")->capture_default_str();
    app.add_option("--alpha-im", cfg.alpha_im, "Im alpha")->capture_default_str();
    app.add_option("--order", cfg.order, "circle order (1 = plain NCS)")->capture_default_str();
    app.add_option("--sector", cfg.sector, "circle sector")->capture_default_str();
    auto* n_opt = app.add_option("--n-max", n_max, "Fock truncation");
    app.add_option("--grid-range", grid_range, "phase-space range LO HI")->expected(2)->capture_default_str();
    app.add_option("--grid-points", cfg.grid_points, "points per axis")->capture_default_str();
    app.add_option("--x-max", cfg.x_max, "u-function range [0, x-max]")->capture_default_str();
    app.add_option("--measure", cfg.measure_kind, "laguerre or mellin")->capture_default_str();
    app.add_option("--r-range", r_range, "convergence radius range LO HI")->expected(2)->capture_default_str();
    app.add_option("--r-points", cfg.r_points, "convergence radii")->capture_default_str();
    app.add_option("--preset", cfg.preset, "figure preset");
    app.add_option("--output", cfg.output_path, "output file (stdout if absent)");
    app.add_option("--format", format_text, "csv or json (state defaults to json)");
    app.add_option("--workers", cfg.workers, "worker threads (0: NCS_THREADS or all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(ncs::ErrorKind::InvalidConfig, e.what());
    }

    if (!command_text.empty()) {
        auto cmd = ncs::parse_command(command_text);
        if (!cmd) return fail(ncs::ErrorKind::InvalidConfig, "unknown command '" + command_text + "'");
        cfg.command = *cmd;
    } else if (!have_command) {
        return fail(ncs::ErrorKind::MissingParameter, "no command given (see --help)");
    }
    if (n_opt->count() > 0) cfg.n_max = n_max;
    cfg.grid_lo = grid_range[0];
    cfg.grid_hi = grid_range[1];
    cfg.r_min = r_range[0];
    cfg.r_max = r_range[1];
    if (format_text == "csv") cfg.format = ncs::Format::Csv;
    else if (format_text == "json") cfg.format = ncs::Format::Json;
    else if (!format_text.empty()) return fail(ncs::ErrorKind::InvalidConfig, "format must be csv or json");

    return ncs::run(cfg, std::cerr);
}
