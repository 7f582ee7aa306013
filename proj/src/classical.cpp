#include "qkr/classical.hpp"

#include <cmath>
#include <numbers>

#include "qkr/errors.hpp"
#include "qkr/parallel.hpp"

namespace qkr {

std::uint64_t SplitMix64::next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return double(next() >> 11) * 0x1.0p-53;
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
    SplitMix64 mix(master_seed ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return mix.next();
}

ClassicalState classical_kick(const ClassicalState& state, double strength) {
    if (strength < 0.0) throw DomainError("kick strength must be >= 0");
    return {state.theta, state.l - strength * std::sin(2.0 * state.theta)};
}

ClassicalState classical_free(const ClassicalState& state, double tau) {
    if (tau < 0.0) throw DomainError("tau must be >= 0");
    double theta = std::fmod(state.theta + tau * state.l, std::numbers::pi);
    if (theta < 0.0) theta += std::numbers::pi;
    return {theta, state.l};
}

ClassicalInitSpec ClassicalInitSpec::thermal(MoleculeSpec molecule, double temperature_K,
                                             double weight_cutoff) {
    ClassicalInitSpec spec;
    spec.kind = Kind::Thermal;
    spec.molecule = std::move(molecule);
    spec.temperature_K = temperature_K;
    spec.weight_cutoff = weight_cutoff;
    return spec;
}

EnergyTrace classical_energy_trace(int ensemble_size, const ClassicalInitSpec& init,
                                   double strength, double tau, int n_kicks,
                                   std::uint64_t seed, int n_threads) {
    if (ensemble_size < 1) throw DomainError("classical ensemble must not be empty");
    if (n_kicks < 1) throw DomainError("n_kicks must be >= 1");
    if (strength < 0.0 || tau < 0.0) throw DomainError("strength and tau must be >= 0");

    // Cumulative J weights for thermal sampling.
    std::vector<std::pair<double, double>> cdf; // (cumulative weight, |l|)
    if (init.kind == ClassicalInitSpec::Kind::Thermal) {
        const auto ens = boltzmann_ensemble(init.molecule, init.temperature_K,
                                            init.weight_cutoff);
        double cum = 0.0;
        for (const auto& [j, w] : ens.j_weights()) {
            cum += w;
            cdf.emplace_back(cum, std::sqrt(double(j) * (j + 1.0)));
        }
    }

    auto sample_l = [&](SplitMix64& rng) {
        if (cdf.empty()) return 0.0;
        const double u = rng.uniform();
        double mag = cdf.back().second;
        for (const auto& [cum, l] : cdf)
            if (u < cum) { mag = l; break; }
        return (rng.uniform() < 0.5) ? -mag : mag;
    };

    // Per-trajectory l^2 records accumulated into fixed-size chunks; the
    // final chunk reduction is sequential, so the result does not depend on
    // the thread count.
    constexpr int chunk_size = 1024;
    const int n_chunks = (ensemble_size + chunk_size - 1) / chunk_size;
    std::vector<std::vector<double>> chunk_sums(n_chunks,
                                                std::vector<double>(n_kicks + 1, 0.0));

    parallel_for(n_chunks, n_threads, [&](int chunk) {
        auto& sums = chunk_sums[chunk];
        const int begin = chunk * chunk_size;
        const int end = std::min(ensemble_size, begin + chunk_size);
        for (int i = begin; i < end; ++i) {
            SplitMix64 rng(trajectory_seed(seed, std::uint64_t(i)));
            ClassicalState s{rng.uniform() * std::numbers::pi, sample_l(rng)};
            sums[0] += s.l * s.l;
            for (int k = 1; k <= n_kicks; ++k) {
                s = classical_kick(s, strength);
                s = classical_free(s, tau);
                sums[k] += s.l * s.l;
            }
        }
    });

    EnergyTrace trace;
    const double period = tau / (2.0 * std::numbers::pi); // units of T_rev
    for (int k = 0; k <= n_kicks; ++k) {
        double sum = 0.0;
        for (int chunk = 0; chunk < n_chunks; ++chunk) sum += chunk_sums[chunk][k];
        const double e = sum / ensemble_size;
        trace.points.push_back({k, k * period, e, 0.0});
    }
    for (auto& p : trace.points) p.absorbed = p.energy - trace.points[0].energy;
    return trace;
}

} // namespace qkr
