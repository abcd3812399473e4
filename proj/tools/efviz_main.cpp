// efviz command-line front end.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "efviz/commands.hpp"
#include "efviz/config.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Simulator and verification harness for the viscoelastic Emden-Fowler wave equation"};
    app.set_version_flag("--version", std::string(EFVIZ_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = "efviz_out";
    app.add_option("--out", out_dir, "Output directory (EFVIZ_OUT_DIR overrides)");

    std::string presets;
    for (const auto& n : efviz::preset_names())
        presets += (presets.empty() ? "" : ", ") + n;
    const std::string cfg_help = "Config file, or preset:NAME (" + presets + ")";

    std::string cfg;
    auto* run = app.add_subcommand("run", "Run one scenario, write diagnostics CSV and JSON summary");
    run->add_option("config", cfg, cfg_help)->required();

    int levels = 4;
    auto* conv = app.add_subcommand("convergence", "Refinement ladder (n -> 2n+1, dt halved) with observed orders");
    conv->add_option("config", cfg, cfg_help)->required();
    conv->add_option("--levels", levels, "Number of levels")->check(CLI::Range(2, 12));

    std::string grid;
    int workers = 1;
    auto* sweep = app.add_subcommand("sweep", "Independent runs over a parameter grid");
    sweep->add_option("config", cfg, cfg_help)->required();
    sweep->add_option("--grid", grid, "Parameter grid, e.g. \"p=3,5;grid.n=50,100\"")->required();
    sweep->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite on a scenario");
    verify->add_option("config", cfg, cfg_help)->required();

    double p = 1.0;
    double dt = 1e-3;
    double t_max = 10.0;
    auto* le = app.add_subcommand("lane-emden", "Lane-Emden solve with closed-form comparison");
    le->add_option("--p", p, "Exponent (closed forms exist for 1 and 5)");
    le->add_option("--dt", dt, "Step size")->check(CLI::PositiveNumber);
    le->add_option("--tmax", t_max, "Horizon")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : efviz::exit_config_error;
    }

    const auto out = efviz::resolve_out_dir(out_dir);
    if (run->parsed())
        return efviz::cmd_run(cfg, out, std::cerr);
    if (conv->parsed())
        return efviz::cmd_convergence(cfg, levels, out, std::cout);
    if (sweep->parsed())
        return efviz::cmd_sweep(cfg, grid, workers, out, std::cerr);
    if (verify->parsed())
        return efviz::cmd_verify(cfg, out, std::cout);
    return efviz::cmd_lane_emden(p, dt, t_max, out, std::cerr);
}
