#ifndef QKR_SCENARIOS_HPP
#define QKR_SCENARIOS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkr/classical.hpp"
#include "qkr/ensembles.hpp"
#include "qkr/observables.hpp"
#include "qkr/rotor.hpp"

namespace qkr {

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> values() const;
};

/// All times in units of T_rev, strengths dimensionless.
struct ExperimentConfig {
    MoleculeSpec molecule = molecule_by_name("O2");
    double temperature_K = 25.0;
    double weight_cutoff = 1e-6;

    struct { // basis
        int j_max = 40;
        double leak_threshold = 1e-6;
    } basis;

    struct { // train
        int n_pre = 3;
        double period_pre = 0.237;
        double delay = 0.243;
        double delay_2 = 0.264;
        int n_loc = 12;
        double period_loc = 0.267;
        double strength = 3.8;
        std::optional<double> strength_pre; // default: strength
    } train;

    struct { // model
        bool delta_kick = true;
        double fwhm = 0.0; // units of T_rev; used when delta_kick is false
        double dt = 0.0;   // split-step; 0 = fwhm/16
    } model;

    struct { // scan
        GridSpec delay_grid{0.001, 1.0, 0.001};
        GridSpec period_grid{0.05, 1.0, 0.005};
        std::vector<double> period_loc_values{0.260, 0.261, 0.263, 0.267, 0.270};
        bool optimize = false;
        GridSpec optimize_grid{0.2, 0.3, 0.001};
        std::vector<std::pair<double, double>> tau_p_pairs{{1.7, 2.0}, {0.6, 5.6}};
        int n_kicks = 40;
        int classical_trajectories = 100000;
    } scan;

    /// Replaces the thermal ensemble with a single pure |J0, m0> state.
    std::optional<std::pair<int, int>> initial_pure;

    std::uint64_t seed = 0;

    void validate() const;

    double strength_pre() const { return train.strength_pre.value_or(train.strength); }
    PropagationOptions propagation_options() const;
    std::optional<double> model_fwhm() const {
        return model.delta_kick ? std::nullopt : std::optional<double>(model.fwhm);
    }
};

struct ScanTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct LabeledPopulations {
    std::string label;
    PopulationDistribution pop;
    RamanSpectrum spectrum;
};

struct ExperimentResult {
    std::string scenario;
    std::vector<std::pair<std::string, EnergyTrace>> traces;
    std::vector<LabeledPopulations> populations;
    ScanTable scan;
    std::vector<std::pair<std::string, double>> metrics;
};

/// Thermal average of one pulse train: per-kick energy trace plus the final
/// J-population distribution.
struct EnsembleRun {
    EnergyTrace trace;
    PopulationDistribution final_populations;
};

EnsembleRun run_train(const ExperimentConfig& config, const PulseTrain& train,
                      int n_threads = 1);

/// Control experiment: both delays, energies, populations, degree of control.
ExperimentResult run_control_experiment(const ExperimentConfig& config, int n_threads = 1);

/// Final energy over a grid of inter-train delays.
ExperimentResult scan_delay(const ExperimentConfig& config, int n_threads = 1);

/// Degree of control across localizing periods, optionally with
/// delays re-optimized by exhaustive grid search.
ExperimentResult scan_period_sensitivity(const ExperimentConfig& config, int n_threads = 1);

/// (tau, P) pairs at fixed K, quantum traces for both delays plus the
/// matched classical ensemble trace.
ExperimentResult quantum_classical_transition(const ExperimentConfig& config,
                                              int n_threads = 1);

/// Final energy of a single periodic train versus its period.
ExperimentResult resonance_map(const ExperimentConfig& config, int n_threads = 1);

/// Standalone classical ensemble run (CLI `classical` subcommand).
ExperimentResult run_classical(const ExperimentConfig& config, int n_threads = 1);

} // namespace qkr

#endif
