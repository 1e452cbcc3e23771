// lambda_lab: command-line front end. Every subcommand writes a JSON report
// envelope; see README.md for the flags and file formats.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lambda_lab/cli.hpp"

using lambda_lab::Command;
using lambda_lab::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"Global boundary invariant lambda of hyperbolic metrics on planar domains"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    RunConfig cfg;
    std::string h_text, schedule_text;
    double beta = 0.0;

    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "report path (default: stdout)"); };

    auto* models = app.add_subcommand("models", "closed-form constants for the round annulus");
    models->add_option("--beta", beta, "inner radius in [0, 1)")->required();
    add_out(models);

    auto* lmap = app.add_subcommand("lambda-map", "lambda from the Laurent data of a conformal map");
    lmap->add_option("--map", cfg.map_path, "map JSON")->required();
    lmap->add_option("--beta", beta, "inner radius; 0 for disk mode")->required();
    lmap->add_flag("--renormalize-outer", cfg.renormalize_outer, "replace f(z) by f(beta/z) first");
    add_out(lmap);

    auto* bt = app.add_subcommand("bt-profile", "A(t) and B(t) on (ln beta, 0)");
    bt->add_option("--map", cfg.map_path, "map JSON")->required();
    bt->add_option("--beta", beta, "inner radius; 0 for disk mode")->required();
    bt->add_option("--n", cfg.n, "number of t samples");
    bt->add_option("--csv", cfg.csv_path, "write t,A,B here");
    bt->add_option("--svg", cfg.svg_path, "write a plot here");
    add_out(bt);

    auto* pde = app.add_subcommand("lambda-pde", "solve for the hyperbolic metric and extract lambda");
    pde->add_option("--domain", cfg.domain_path, "domain JSON")->required();
    pde->add_option("--h", h_text, "grid spacing in units of the domain scale, e.g. 1/256");
    pde->add_option("--schedule", schedule_text, "comma-separated offsets in units of the domain scale");
    pde->add_option("--frames", cfg.frames, "boundary frames for the expansion fit");
    pde->add_option("--init", cfg.init, "log_distance or barrier_max");
    pde->add_option("--field", cfg.field_path, "write u on the grid (binary) here");
    pde->add_option("--csv", cfg.csv_path, "write per-frame s,kappa,c3,residual here");
    pde->add_option("--report", cfg.out, "report path (default: stdout)");
    add_out(pde);

    auto* mod = app.add_subcommand("modulus", "conformal modulus of a doubly-connected domain");
    mod->add_option("--domain", cfg.domain_path, "domain JSON")->required();
    add_out(mod);

    auto* ver = app.add_subcommand("verify", "run an acceptance suite");
    ver->add_option("--suite", cfg.suite, "paper, properties, cross or all");
    ver->add_option("--seed", cfg.seed, "seed for the randomized checks");
    add_out(ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*models) cfg.command = Command::models;
        if (*lmap) cfg.command = Command::lambda_map;
        if (*bt) cfg.command = Command::bt_profile;
        if (*pde) cfg.command = Command::lambda_pde;
        if (*mod) cfg.command = Command::modulus;
        if (*ver) cfg.command = Command::verify;
        if (*models || *lmap || *bt) cfg.beta = beta;
        if (!h_text.empty()) cfg.h = lambda_lab::parse_length(h_text);
        if (!schedule_text.empty()) cfg.schedule = lambda_lab::parse_schedule(schedule_text);
        cfg.emit_svg = !cfg.svg_path.empty();
    } catch (const lambda_lab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return lambda_lab::run(cfg);
}
