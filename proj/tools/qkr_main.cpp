#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qkr/config.hpp"
#include "qkr/io.hpp"

namespace {

using Runner = std::function<qkr::ExperimentResult(const qkr::ExperimentConfig&, int)>;

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Experiment config file (JSON)")
        ->required();
    const char* env_out = std::getenv("QKR_OUT_DIR");
    opts.out_dir = env_out ? env_out : "out";
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--seed", opts.seed, "Seed override (non-negative)");
    cmd->add_option("--threads", opts.threads, "Worker thread count")
        ->check(CLI::PositiveNumber);
}

int run(const CommonOptions& opts, const Runner& runner) {
    qkr::ExperimentConfig config;
    try {
        config = qkr::parse_config(opts.config_path);
        if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
    } catch (const qkr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    try {
        const auto start = std::chrono::steady_clock::now();
        const qkr::ExperimentResult result = runner(config, opts.threads);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto written = qkr::write_results(result, config, opts.out_dir, wall);
        for (const auto& name : written)
            std::cout << opts.out_dir << "/" << name << "\n";
        for (const auto& [key, value] : result.metrics)
            std::cout << key << " = " << qkr::format_csv_number(value) << "\n";
        return 0;
    } catch (const qkr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum kicked rotor: dynamical localization and coherent control"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        Runner runner;
        CommonOptions opts;
        CLI::App* cmd = nullptr;
    };
    Sub subs[] = {
        {"simulate", "Two-delay control experiment (energy traces, populations)",
         [](const auto& c, int t) { return qkr::run_control_experiment(c, t); }, {}},
        {"scan-delay", "Final energy vs inter-train delay",
         [](const auto& c, int t) { return qkr::scan_delay(c, t); }, {}},
        {"scan-period", "Degree of control vs localizing period, with re-optimization",
         [](const auto& c, int t) { return qkr::scan_period_sensitivity(c, t); }, {}},
        {"transition", "Quantum-classical transition at fixed K",
         [](const auto& c, int t) { return qkr::quantum_classical_transition(c, t); }, {}},
        {"resonance-map", "Final energy vs single-train period",
         [](const auto& c, int t) { return qkr::resonance_map(c, t); }, {}},
        {"classical", "Classical kicked-rotor ensemble energy trace",
         [](const auto& c, int t) { return qkr::run_classical(c, t); }, {}},
    };
    for (auto& sub : subs) {
        sub.cmd = app.add_subcommand(sub.name, sub.help);
        add_common(sub.cmd, sub.opts);
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& sub : subs)
        if (sub.cmd->parsed()) return run(sub.opts, sub.runner);
    return 1;
}
