#include "sblab/bernstein.hpp"
#include "sblab/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

int cmd_run(const std::string& config_path, std::string out_dir, int workers,
            long long seed_override) {
    sblab::exp::ExperimentConfig cfg;
    try {
        cfg = sblab::exp::ExperimentConfig::load(config_path);
        if (seed_override >= 0) {
            cfg.raw["mc"]["seed"] = static_cast<std::uint64_t>(seed_override);
            cfg = sblab::exp::ExperimentConfig::from_json(cfg.raw);
        }
    } catch (const sblab::exp::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    }
    if (out_dir.empty()) out_dir = sblab::exp::default_out_dir(cfg);
    try {
        sblab::exp::ExperimentReport rep =
            sblab::exp::run_experiment(cfg, out_dir, workers);
        std::printf("%s: %s (%s)\n", cfg.experiment.c_str(),
                    rep.overall.c_str(), out_dir.c_str());
        for (const auto& c : rep.checks)
            std::printf("  [%s] %s\n", c.verdict.c_str(), c.name.c_str());
        return rep.exit_code();
    } catch (const sblab::exp::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        sblab::exp::ExperimentConfig cfg =
            sblab::exp::ExperimentConfig::load(config_path);
        std::printf("ok: %s\n", cfg.experiment.c_str());
        return 0;
    } catch (const sblab::exp::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    }
}

void cmd_families() {
    std::printf(
        "family                  parameters\n"
        "stable                  alpha in (0,2]          lambda^(alpha/2)\n"
        "power-sum               alpha,kappa in (0,1)    "
        "(lambda+lambda^alpha)^kappa\n"
        "relativistic            alpha in (0,2), m > 0   "
        "(lambda+m^(2/alpha))^(alpha/2)-m\n"
        "stable-sum              0 <= kappa < alpha <= 2 "
        "lambda^(alpha/2)+lambda^(kappa/2)\n"
        "stable-log              alpha in (0,2), kappa in (-alpha/2,1-alpha/2) "
        "lambda^(alpha/2)*log(1+lambda)^kappa\n"
        "geometric               alpha in (0,2]          "
        "log(1+lambda^(alpha/2))\n"
        "relativistic-geometric  alpha in (0,2), m > 0   "
        "log(1+(lambda+m^(2/alpha))^(alpha/2)-m)\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for subordinate Brownian motion "
                 "boundary behavior"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = 1;
    long long seed = -1;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "JSON experiment config")
        ->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads");
    run->add_option("--seed", seed, "override mc.seed");

    auto* validate =
        app.add_subcommand("validate", "parse and validate a config");
    validate->add_option("config", config_path, "JSON experiment config")
        ->required();

    auto* families =
        app.add_subcommand("families", "list packaged Laplace exponents");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir, workers, seed);
    if (validate->parsed()) return cmd_validate(config_path);
    if (families->parsed()) cmd_families();
    return 0;
}
