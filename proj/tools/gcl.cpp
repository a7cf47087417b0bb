#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcl/reports.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Closed geodesics on hyperbolic surfaces: census, intersections and counting bounds"};
    app.require_subcommand(1);

    std::string config_path;
    double max_length = 0.0;
    std::vector<double> eps;
    int threads = 0;
    bool nudge = false;
    std::uint64_t seed = 0;
    std::string outputs;
    std::string fault;
    int genus = 0;
    double sys = 0.0;
    std::vector<double> T_grid, i_cc;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--max-length", max_length, "length bound T");
        sub->add_option("--eps", eps, "eps grid, comma separated")->delimiter(',');
        sub->add_option("--threads", threads, "worker threads");
        sub->add_flag("--nudge-twists", nudge, "perturb all twists by 1e-3 before building");
        sub->add_option("--seed", seed, "seed for randomized checks");
        sub->add_option("--out", outputs, "output directory");
    };
    CLI::App* build = app.add_subcommand("build", "write surface.json, hexagons.json and ledger.json");
    CLI::App* census = app.add_subcommand("census", "enumerate classes up to the length bound into census.csv");
    CLI::App* verify = app.add_subcommand("verify", "run the invariant families over the census");
    CLI::App* bounds = app.add_subcommand("bounds", "tabulate the counting and entropy bounds");
    CLI::App* words = app.add_subcommand("words", "symbolic words and edge words of every class");
    for (CLI::App* sub : {build, census, verify, bounds, words}) common(sub);
    verify->add_option("--inject-fault", fault, "skip-proper-ordering");
    bounds->add_option("--genus", genus, "genus, with --sys instead of ledger.json");
    bounds->add_option("--sys", sys, "systole, with --genus");
    bounds->add_option("--T-grid", T_grid, "lengths for census comparisons")->delimiter(',');
    bounds->add_option("--i-cc", i_cc, "self-intersection values for the entropy table")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? gcl::kExitOk : gcl::kExitInput;
    }

    return gcl::run_guarded(
        [&] {
            gcl::RunConfig cfg = config_path.empty() ? gcl::RunConfig{} : gcl::load_run_config(config_path);
            if (max_length > 0.0) cfg.max_length = max_length;
            if (!eps.empty()) cfg.eps_grid = eps;
            if (threads > 0) cfg.threads = threads;
            if (nudge) cfg.nudge_twists = true;
            if (seed) cfg.seed = seed;
            if (!outputs.empty()) cfg.outputs = outputs;
            if (!fault.empty()) cfg.inject_fault = fault;
            if (genus) cfg.genus = genus;
            if (sys > 0.0) cfg.sys = sys;
            if (!T_grid.empty()) cfg.T_grid = T_grid;
            if (!i_cc.empty()) cfg.i_cc_grid = i_cc;

            if (*build) return gcl::cmd_build(cfg, std::cout);
            if (*census) return gcl::cmd_census(cfg, std::cout);
            if (*verify) return gcl::cmd_verify(cfg, std::cout);
            if (*bounds) return gcl::cmd_bounds(cfg, std::cout);
            return gcl::cmd_words(cfg, std::cout);
        },
        std::cerr);
}
