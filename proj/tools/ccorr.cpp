#include <iostream>

#include <CLI11.hpp>

#include "ccorr/cli/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Continuity correction toolkit for perpetual Bermudan options on Levy baskets"};
    ccorr::cli::RunOptions opts;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    double tol = 0.0;

    std::string list;
    for (const auto& c : ccorr::cli::commands()) {
        list += (list.empty() ? "" : ", ") + c;
    }
    app.add_option("command", opts.command, "One of: " + list)->required();
    app.add_option("--config", opts.config_path, "INI file with [model], [region], [payoff], [run] sections")
        ->required();
    app.add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides run.seed)");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads, 0 = all cores");
    auto* tol_opt = app.add_option("--tol", tol, "Series / solver tolerance (overrides run.tol)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (*seed_opt) {
        opts.seed = seed;
    }
    if (*threads_opt) {
        opts.threads = threads;
    }
    if (*tol_opt) {
        opts.tol = tol;
    }
    return ccorr::cli::run(opts, std::cout, std::cerr);
}
