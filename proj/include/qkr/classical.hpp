#ifndef QKR_CLASSICAL_HPP
#define QKR_CLASSICAL_HPP

#include <cstdint>
#include <vector>

#include "qkr/ensembles.hpp"
#include "qkr/observables.hpp"

namespace qkr {

/// Classical kicked-rotor phase space point. theta lives on [0, pi) since the
/// cos^2 potential has period pi; l is angular momentum in units of hbar.
struct ClassicalState {
    double theta = 0.0;
    double l = 0.0;
};

/// splitmix64; counter-style generator used for all classical sampling so
/// per-trajectory streams are independent of thread scheduling.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next();
    /// Uniform double in [0, 1).
    double uniform();
};

/// Stream seed for trajectory `index` under a master seed.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

/// Impulse from the cos^2 potential: l -> l - P sin(2 theta).
ClassicalState classical_kick(const ClassicalState& state, double strength);

/// Free streaming: theta -> (theta + tau l) mod pi.
ClassicalState classical_free(const ClassicalState& state, double tau);

/// Initial conditions: theta always uniform on [0, pi); l either zero or the
/// classical analog of a thermal rotational ensemble (|l| = sqrt(J0(J0+1))
/// drawn with the quantum member weights, random sign).
struct ClassicalInitSpec {
    enum class Kind { Zero, Thermal } kind = Kind::Zero;
    MoleculeSpec molecule;
    double temperature_K = 0.0;
    double weight_cutoff = 1e-6;

    static ClassicalInitSpec zero() { return {}; }
    static ClassicalInitSpec thermal(MoleculeSpec molecule, double temperature_K,
                                     double weight_cutoff = 1e-6);
};

/// Ensemble-mean energy <l^2> (units of B) after each of n_kicks kicks,
/// index 0 being the initial ensemble. Deterministic for a fixed seed,
/// independent of the thread count.
EnergyTrace classical_energy_trace(int ensemble_size, const ClassicalInitSpec& init,
                                   double strength, double tau, int n_kicks,
                                   std::uint64_t seed, int n_threads = 1);

} // namespace qkr

#endif
