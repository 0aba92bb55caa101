#include <iostream>

#include <CLI11.hpp>

#include "dreg/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Distributed output regulation simulator for leader-following multi-agent systems"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = "out";
    dreg::Overrides ov;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--dt", ov.dt, "Integrator step");
        cmd->add_option("--t-end", ov.t_end, "Final time");
        cmd->add_option("--controller", ov.controller, "global|semiglobal")
            ->check(CLI::IsMember({"global", "semiglobal"}));
        cmd->add_option("--switch", ov.switch_kind, "sign|sat")->check(CLI::IsMember({"sign", "sat"}));
        cmd->add_option("--eps", ov.eps, "Saturation boundary-layer width");
        cmd->add_option("--seed", ov.seed, "Sweep seed");
    };

    auto* run = app.add_subcommand("run", "Simulate one scenario");
    add_common(run);
    run->add_option("--out", out_dir, "Output directory");

    auto* check = app.add_subcommand("check", "Verify graph, internal-model and regulator conditions");
    add_common(check);

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over the uncertain parameters");
    add_common(sweep);
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--count", ov.count, "Number of samples")->check(CLI::PositiveNumber);
    sweep->add_option("--threshold", ov.threshold, "Tail error threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dreg::kExitConfig;
    }

    if (*run) return dreg::cmd_run(config, out_dir, ov, std::cout, std::cerr);
    if (*check) return dreg::cmd_check(config, ov, std::cout, std::cerr);
    return dreg::cmd_sweep(config, out_dir, ov, std::cout, std::cerr);
}
