#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hsplab/errors.hpp"
#include "hsplab_cli/commands.hpp"
#include "hsplab_cli/scenario.hpp"

using namespace hsplab;
using namespace hsplab::cli;

int main(int argc, char** argv) {
    CLI::App app{"Radial numerical lab for the Hardy-Sobolev parabolic equation"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config, "Scenario JSON file")->required();
    app.add_option("--out", out, "Output directory (overrides output_dir)");
    app.add_option("--threads", threads, "Worker threads for sweeps (0: all cores)");
    app.add_option("--seed", seed, "Corpus seed (overrides the scenario seed)");

    auto* simulate = app.add_subcommand("simulate", "Run the flow and its decay analyses");
    auto* character = app.add_subcommand("decay-character", "Decay character of u0 and Lambda u0");
    auto* inequalities = app.add_subcommand("check-inequalities", "Inequality suite on the corpus");
    auto* predict = app.add_subcommand("predict", "Predicted decay rate");
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep over one axis");
    for (auto* sub : {simulate, character, inequalities, predict, sweep}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        Scenario s = load_scenario(config);
        if (seed) s.seed = *seed;
        if (!out.empty()) s.output_dir = out;
        if (std::filesystem::exists(s.output_dir) && !std::filesystem::is_directory(s.output_dir)) {
            throw ValidationError("output_dir", "'" + s.output_dir + "' is not a directory");
        }
        if (*simulate) return cmd_simulate(s, s.output_dir, std::cout);
        if (*character) return cmd_decay_character(s, s.output_dir, std::cout);
        if (*inequalities) return cmd_check_inequalities(s, s.output_dir, std::cout);
        if (*predict) return cmd_predict(s, s.output_dir, std::cout);
        if (*sweep) return cmd_sweep(s, s.output_dir, threads, std::cout);
    } catch (const ValidationError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInvalid;
}
