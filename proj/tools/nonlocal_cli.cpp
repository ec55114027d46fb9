#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "nonlocal/runner.hpp"

int main(int argc, char** argv) {
    using namespace nonlocal;
    CLI::App app{"Nonlocal-in-time evolution equations: scenarios, verification suites, relaxation tables"};
    app.set_version_flag("--version", std::string(library_version));
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("config", config, "Scenario file (INI)")->required();

    std::string vfamily;
    bool full = false;
    std::uint64_t seed = 42;
    auto* verify = app.add_subcommand("verify", "Run the property suites for a kernel family");
    verify->add_option("family", vfamily, "fractional | distributed_order | tempered | two_term")->required();
    verify->add_flag("--full", full, "1024 steps instead of 256");
    verify->add_option("--seed", seed, "Seed for randomized cases");

    std::string tfamily;
    double mu = 1.0, T = 1.0;
    std::size_t steps = 1024;
    double alpha = -1.0, beta = -1.0, weight = -1.0, gamma = -1.0;
    auto* tables = app.add_subcommand("tables", "Write s and r tables for one mu");
    tables->add_option("family", tfamily, "Kernel family")->required();
    tables->add_option("--mu", mu, "Relaxation parameter mu > 0")->required();
    tables->add_option("--steps", steps, "Number of uniform steps")->required();
    tables->add_option("--T", T, "Horizon");
    tables->add_option("--alpha", alpha, "Order alpha (fractional, tempered, two_term)");
    tables->add_option("--beta", beta, "Second order beta (two_term)");
    tables->add_option("--weight", weight, "Weight of the second term (two_term)");
    tables->add_option("--gamma", gamma, "Tempering rate (tempered)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    if (*run) return run_scenario(config);
    if (*verify) return run_verify(vfamily, full, std::cout, std::cerr, seed);

    KernelPair pair;
    try {
        pair = preset_pair(parse_family(tfamily));
        if (alpha >= 0.0) pair.alpha = alpha;
        if (beta >= 0.0) pair.beta = beta;
        if (weight >= 0.0 && pair.family == KernelFamily::TwoTerm) pair.mu_temper = weight;
        if (gamma >= 0.0 && pair.family == KernelFamily::TemperedFractional) pair.mu_temper = gamma;
        validate(pair);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }
    return dump_tables(pair, mu, steps, T);
}
