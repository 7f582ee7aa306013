#include "qkr/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "qkr/errors.hpp"
#include "qkr/parallel.hpp"

namespace qkr {

namespace {

std::string format_double(double x, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
    return buf;
}

Parity parity_of(int j) { return (j % 2 == 0) ? Parity::EvenJ : Parity::OddJ; }

struct MemberJob {
    double weight = 0.0;
    int j0 = 0;
    int m_abs = 0;
};

// Kick dynamics depend on m only through m^2, so +-m members are merged.
std::vector<MemberJob> unique_members(const ExperimentConfig& config) {
    if (config.initial_pure) {
        const auto [j0, m0] = *config.initial_pure;
        return {{1.0, j0, std::abs(m0)}};
    }
    const auto ens = boltzmann_ensemble(config.molecule, config.temperature_K,
                                        config.weight_cutoff);
    std::map<std::pair<int, int>, double> grouped;
    for (const auto& member : ens.members)
        grouped[{member.j0, std::abs(member.m0)}] += member.weight;
    std::vector<MemberJob> jobs;
    jobs.reserve(grouped.size());
    for (const auto& [key, w] : grouped) jobs.push_back({w, key.first, key.second});
    return jobs;
}

struct MemberResult {
    std::vector<double> energies; // per snapshot, units of B
    PopulationDistribution final_pops;
};

MemberResult simulate_member(const ExperimentConfig& config, const PulseTrain& train,
                             const MemberJob& job) {
    const RotorBasis basis = build_basis(config.basis.j_max, parity_of(job.j0), job.m_abs);
    const WavePacket initial = WavePacket::pure(basis, job.j0);
    const Trajectory traj = propagate_train(initial, train, config.propagation_options());
    MemberResult out;
    out.energies.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots)
        out.energies.push_back(rotational_energy(populations(snap)));
    out.final_pops = populations(traj.snapshots.back());
    return out;
}

} // namespace

std::vector<double> GridSpec::values() const {
    if (!(step > 0.0) || stop < start) throw ConfigError("invalid grid spec");
    std::vector<double> vals;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) vals.push_back(start + i * step);
    return vals;
}

void ExperimentConfig::validate() const {
    molecule.validate();
    if (temperature_K < 0.0) throw ConfigError("temperature_K must be >= 0");
    if (basis.j_max < 0) throw ConfigError("basis.j_max must be >= 0");
    if (!(basis.leak_threshold > 0.0)) throw ConfigError("basis.leak_threshold must be > 0");
    if (train.n_pre < 0 || train.n_loc < 0) throw ConfigError("pulse counts must be >= 0");
    if (train.n_pre > 1 && !(train.period_pre > 0.0))
        throw ConfigError("train.period_pre must be > 0");
    if (train.n_loc > 1 && !(train.period_loc > 0.0))
        throw ConfigError("train.period_loc must be > 0");
    if (train.n_pre > 0 && train.n_loc > 0 && !(train.delay > 0.0 && train.delay_2 > 0.0))
        throw ConfigError("train delays must be > 0");
    if (train.strength < 0.0) throw ConfigError("train.strength must be >= 0");
    if (!model.delta_kick && !(model.fwhm > 0.0))
        throw ConfigError("model.fwhm must be > 0 for the finite-pulse model");
    if (scan.n_kicks < 1) throw ConfigError("scan.n_kicks must be >= 1");
    if (scan.classical_trajectories < 1)
        throw ConfigError("scan.classical_trajectories must be >= 1");
}

PropagationOptions ExperimentConfig::propagation_options() const {
    PropagationOptions opts;
    opts.leak_threshold = basis.leak_threshold;
    opts.finite_pulse_dt = model.dt;
    return opts;
}

EnsembleRun run_train(const ExperimentConfig& config, const PulseTrain& train,
                      int n_threads) {
    const auto jobs = unique_members(config);
    std::vector<MemberResult> results(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), n_threads,
                 [&](int i) { results[i] = simulate_member(config, train, jobs[i]); });

    EnsembleRun run;
    const size_t n_points = results.empty() ? 0 : results[0].energies.size();
    std::vector<double> energies(n_points, 0.0);
    for (size_t i = 0; i < jobs.size(); ++i) {
        for (size_t k = 0; k < n_points; ++k)
            energies[k] += jobs[i].weight * results[i].energies[k];
        for (const auto& [j, p] : results[i].final_pops.entries)
            run.final_populations.entries[j] += jobs[i].weight * p;
    }
    for (size_t k = 0; k < n_points; ++k) {
        const double t = (k == 0) ? 0.0
                                  : train.pulses()[k - 1].time;
        run.trace.points.push_back({static_cast<int>(k), t, energies[k],
                                    energies[k] - energies[0]});
    }
    return run;
}

namespace {

PulseTrain control_train_for(const ExperimentConfig& config, double delay) {
    return PulseTrain::control_train(config.train.n_pre, config.train.period_pre, delay,
                                     config.train.n_loc, config.train.period_loc,
                                     config.strength_pre(), config.train.strength,
                                     config.model_fwhm());
}

double final_absorbed(const EnsembleRun& run) {
    return run.trace.points.back().absorbed;
}

// The controlled observable is the total rotational energy sum(E_J P_J),
// not the absorbed excess over the thermal baseline.
double final_energy(const EnsembleRun& run) {
    return run.trace.points.back().energy;
}

void add_population_outputs(ExperimentResult& result, const std::string& label,
                            const EnsembleRun& run) {
    result.populations.push_back({label, run.final_populations,
                                  raman_forward(run.final_populations)});
}

} // namespace

ExperimentResult run_control_experiment(const ExperimentConfig& config, int n_threads) {
    config.validate();
    ExperimentResult result;
    result.scenario = "simulate";

    const EnsembleRun run1 = run_train(config, control_train_for(config, config.train.delay),
                                       n_threads);
    const EnsembleRun run2 = run_train(config,
                                       control_train_for(config, config.train.delay_2),
                                       n_threads);
    result.traces.emplace_back("delay1", run1.trace);
    result.traces.emplace_back("delay2", run2.trace);
    add_population_outputs(result, "delay1", run1);
    add_population_outputs(result, "delay2", run2);

    const double e1 = final_absorbed(run1);
    const double e2 = final_absorbed(run2);
    result.metrics.emplace_back("final_absorbed_delay1_B", e1);
    result.metrics.emplace_back("final_absorbed_delay2_B", e2);
    result.metrics.emplace_back("final_energy_delay1_B", run1.trace.points.back().energy);
    result.metrics.emplace_back("final_energy_delay2_B", run2.trace.points.back().energy);
    result.metrics.emplace_back(
        "degree_of_control", degree_of_control(run1.trace.points.back().energy,
                                               run2.trace.points.back().energy));
    result.metrics.emplace_back("participation_ratio_delay1",
                                participation_ratio(run1.final_populations));
    result.metrics.emplace_back("participation_ratio_delay2",
                                participation_ratio(run2.final_populations));
    const auto bt1 = break_time_estimate(run1.trace, 0.1);
    const auto bt2 = break_time_estimate(run2.trace, 0.1);
    result.metrics.emplace_back("break_time_delay1", bt1 ? double(*bt1) : -1.0);
    result.metrics.emplace_back("break_time_delay2", bt2 ? double(*bt2) : -1.0);
    return result;
}

ExperimentResult scan_delay(const ExperimentConfig& config, int n_threads) {
    config.validate();
    ExperimentResult result;
    result.scenario = "scan-delay";

    const auto delays = config.scan.delay_grid.values();
    std::vector<std::pair<double, double>> finals(delays.size()); // (energy, absorbed)
    parallel_for(static_cast<int>(delays.size()), n_threads, [&](int i) {
        const EnsembleRun run = run_train(config, control_train_for(config, delays[i]), 1);
        finals[i] = {run.trace.points.back().energy, run.trace.points.back().absorbed};
    });

    result.scan.columns = {"delay_over_trev", "final_energy_B", "final_absorbed_B"};
    for (size_t i = 0; i < delays.size(); ++i)
        result.scan.rows.push_back({delays[i], finals[i].first, finals[i].second});
    return result;
}

ExperimentResult scan_period_sensitivity(const ExperimentConfig& config, int n_threads) {
    config.validate();
    if (config.scan.period_loc_values.empty())
        throw ConfigError("scan.period_loc_values must not be empty");
    ExperimentResult result;
    result.scenario = "scan-period";

    const auto& periods = config.scan.period_loc_values;
    const auto opt_delays = config.scan.optimize
                                ? config.scan.optimize_grid.values()
                                : std::vector<double>{};

    // Flat job list: for each period, the two fixed delays then the
    // optimization grid.
    struct Job { int period_idx; double delay; };
    std::vector<Job> jobs;
    for (size_t pi = 0; pi < periods.size(); ++pi) {
        jobs.push_back({static_cast<int>(pi), config.train.delay});
        jobs.push_back({static_cast<int>(pi), config.train.delay_2});
        for (double d : opt_delays) jobs.push_back({static_cast<int>(pi), d});
    }
    std::vector<EnsembleRun> runs(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), n_threads, [&](int i) {
        ExperimentConfig local = config;
        local.train.period_loc = periods[jobs[i].period_idx];
        runs[i] = run_train(local, control_train_for(local, jobs[i].delay), 1);
    });

    result.scan.columns = {"period_loc_over_trev", "control_fixed", "control_optimized",
                           "delay_max", "delay_min"};
    const size_t stride = 2 + opt_delays.size();
    for (size_t pi = 0; pi < periods.size(); ++pi) {
        const size_t base = pi * stride;
        const double e1 = final_energy(runs[base]);
        const double e2 = final_energy(runs[base + 1]);
        const double fixed_control = degree_of_control(e1, e2);

        double opt_control = fixed_control;
        double delay_max = config.train.delay;
        double delay_min = config.train.delay_2;
        if (config.scan.optimize) {
            double e_max = e1, e_min = e2;
            for (size_t gi = 0; gi < opt_delays.size(); ++gi) {
                const double e = final_energy(runs[base + 2 + gi]);
                if (e > e_max) { e_max = e; delay_max = opt_delays[gi]; }
                if (e < e_min) { e_min = e; delay_min = opt_delays[gi]; }
            }
            opt_control = degree_of_control(e_max, e_min);
        }
        result.scan.rows.push_back({periods[pi], fixed_control, opt_control,
                                    delay_max, delay_min});
        const std::string tag = "Tloc" + format_double(periods[pi]);
        result.traces.emplace_back(tag + "_delay1", runs[base].trace);
        result.traces.emplace_back(tag + "_delay2", runs[base + 1].trace);
        result.metrics.emplace_back("control_fixed_" + tag, fixed_control);
        result.metrics.emplace_back("control_optimized_" + tag, opt_control);
    }
    return result;
}

ExperimentResult quantum_classical_transition(const ExperimentConfig& config,
                                              int n_threads) {
    config.validate();
    if (config.scan.tau_p_pairs.empty())
        throw ConfigError("scan.tau_p_pairs must not be empty");
    const double k0 = config.scan.tau_p_pairs[0].first * config.scan.tau_p_pairs[0].second;
    for (const auto& [tau, p] : config.scan.tau_p_pairs)
        if (std::abs(tau * p - k0) > 1e-9)
            throw ConfigError("all (tau, P) pairs must share the same K = tau * P");

    ExperimentResult result;
    result.scenario = "transition";
    result.metrics.emplace_back("stochasticity_K", k0);

    for (const auto& [tau, p] : config.scan.tau_p_pairs) {
        ExperimentConfig local = config;
        local.train.period_loc = tau / (2.0 * std::numbers::pi);
        local.train.strength = p;
        if (!config.train.strength_pre) local.train.strength_pre = p;
        local.train.n_loc = config.scan.n_kicks - local.train.n_pre;
        if (local.train.n_loc < 1)
            throw ConfigError("scan.n_kicks must exceed train.n_pre");

        const std::string tag = "tau" + format_double(tau);
        const EnsembleRun run1 = run_train(local, control_train_for(local, local.train.delay),
                                           n_threads);
        const EnsembleRun run2 = run_train(local,
                                           control_train_for(local, local.train.delay_2),
                                           n_threads);
        result.traces.emplace_back(tag + "_delay1", run1.trace);
        result.traces.emplace_back(tag + "_delay2", run2.trace);
        add_population_outputs(result, tag + "_delay1", run1);
        add_population_outputs(result, tag + "_delay2", run2);
        result.metrics.emplace_back("control_" + tag,
                                    degree_of_control(final_energy(run1),
                                                      final_energy(run2)));

        const auto init = ClassicalInitSpec::thermal(local.molecule, local.temperature_K,
                                                     local.weight_cutoff);
        const EnergyTrace classical = classical_energy_trace(
            config.scan.classical_trajectories, init, p, tau, config.scan.n_kicks,
            config.seed, n_threads);
        result.traces.emplace_back(tag + "_classical", classical);
    }
    return result;
}

ExperimentResult resonance_map(const ExperimentConfig& config, int n_threads) {
    config.validate();
    ExperimentResult result;
    result.scenario = "resonance-map";

    const auto periods = config.scan.period_grid.values();
    std::vector<std::pair<double, double>> finals(periods.size());
    parallel_for(static_cast<int>(periods.size()), n_threads, [&](int i) {
        const auto train = PulseTrain::periodic(config.scan.n_kicks, periods[i],
                                                config.train.strength, config.model_fwhm());
        const EnsembleRun run = run_train(config, train, 1);
        finals[i] = {run.trace.points.back().energy, run.trace.points.back().absorbed};
    });

    result.scan.columns = {"period_over_trev", "final_energy_B", "final_absorbed_B"};
    for (size_t i = 0; i < periods.size(); ++i)
        result.scan.rows.push_back({periods[i], finals[i].first, finals[i].second});
    return result;
}

ExperimentResult run_classical(const ExperimentConfig& config, int n_threads) {
    config.validate();
    ExperimentResult result;
    result.scenario = "classical";

    const double tau = 2.0 * std::numbers::pi * config.train.period_loc;
    const auto init = (config.temperature_K > 0.0)
                          ? ClassicalInitSpec::thermal(config.molecule, config.temperature_K,
                                                       config.weight_cutoff)
                          : ClassicalInitSpec::zero();
    const EnergyTrace trace = classical_energy_trace(
        config.scan.classical_trajectories, init, config.train.strength, tau,
        config.scan.n_kicks, config.seed, n_threads);
    result.traces.emplace_back("classical", trace);
    result.metrics.emplace_back("stochasticity_K", tau * config.train.strength);
    result.metrics.emplace_back("final_absorbed_B", trace.points.back().absorbed);
    return result;
}

} // namespace qkr
