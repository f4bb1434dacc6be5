#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "speigen/commands.hpp"

namespace {

struct CliOptions {
    std::string n_spec;
    std::string out_dir = ".";
    std::string cache_dir;
    std::string format = "csv";
    std::string integrator = "numerov";
    std::string quadrature = "trapezoid";
    speigen::RunConfig run;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--n", opt.n_spec,
                    "levels to process: '3', '0..8', '10..40:5', comma-joined")
        ->required();
    cmd->add_option("--out", opt.out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--cache", opt.cache_dir,
                    "state cache directory (default: $SP_EIGEN_CACHE or ./sp-cache)");
    cmd->add_option("--jobs", opt.run.jobs, "parallel solves")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto& s = opt.run.solver;
    cmd->add_option("--tol-inner", s.inner_tol, "SCF convergence tolerance on ε")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol-outer", s.outer_tol,
                    "domain-extension convergence tolerance on ε")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--growth", s.domain_growth, "domain growth factor")
        ->check(CLI::Range(1.01, 10.0))
        ->capture_default_str();
    cmd->add_option("--mixing", s.mixing, "potential mixing weight")
        ->check(CLI::Range(1e-3, 1.0))
        ->capture_default_str();
    cmd->add_option("--ppw", s.points_per_wavelength,
                    "grid points per innermost oscillation")
        ->check(CLI::Range(4, 4096))
        ->capture_default_str();
    cmd->add_option("--initial-domain", s.initial_domain,
                    "initial outer radius (0 = automatic)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--integrator", opt.integrator, "radial integrator")
        ->check(CLI::IsMember({"numerov", "rk4"}))
        ->capture_default_str();
    cmd->add_option("--quadrature", opt.quadrature, "cumulative quadrature")
        ->check(CLI::IsMember({"trapezoid", "simpson"}))
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sp_eigen: excited stationary states of the spherically symmetric\n"
        "Schrodinger-Poisson problem, their structural features, heuristic\n"
        "scaling laws and universality collapse"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "1.0.0");
    app.set_config("--config", "", "read options from an INI file");

    CliOptions opt;
    auto* solve = app.add_subcommand(
        "solve", "solve or load the requested states, write a summary table");
    auto* features = app.add_subcommand(
        "features", "per-state exports: profile, nodes, distances, extrema, "
                    "velocity extrema, rescaled pattern");
    auto* report = app.add_subcommand(
        "report", "cross-state heuristic law fits and per-state summary");
    auto* validate = app.add_subcommand(
        "validate", "re-solve at doubled resolution and compare");
    auto* collapse = app.add_subcommand(
        "collapse", "rescaled-curve collapse metrics");
    for (auto* cmd : {solve, features, report, validate, collapse})
        add_common_options(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? speigen::exit_ok : speigen::exit_usage;
    }

    try {
        opt.run.n_values = speigen::parse_n_spec(opt.n_spec);
        opt.run.out_dir = opt.out_dir;
        opt.run.cache_dir = opt.cache_dir;
        opt.run.format = opt.format;
        opt.run.solver.integrator = opt.integrator == "rk4"
                                        ? speigen::Integrator::rk4
                                        : speigen::Integrator::numerov;
        opt.run.solver.quadrature = opt.quadrature == "simpson"
                                        ? speigen::Quadrature::simpson
                                        : speigen::Quadrature::trapezoid;

        if (solve->parsed()) return speigen::run_solve(opt.run, std::cout);
        if (features->parsed()) return speigen::run_features(opt.run, std::cout);
        if (report->parsed()) return speigen::run_report(opt.run, std::cout);
        if (validate->parsed()) return speigen::run_validate(opt.run, std::cout);
        if (collapse->parsed()) return speigen::run_collapse(opt.run, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return speigen::exit_usage;
    }
    return speigen::exit_usage;
}
