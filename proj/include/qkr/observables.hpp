#ifndef QKR_OBSERVABLES_HPP
#define QKR_OBSERVABLES_HPP

#include <map>
#include <optional>
#include <vector>

#include "qkr/basis.hpp"

namespace qkr {

/// P_J over rotational levels; sums to 1.
struct PopulationDistribution {
    std::map<int, double> entries;

    double total() const;
    void validate() const;
};

/// Per-pulse energy record. Energies in units of B; absorbed is relative to
/// the index-0 entry.
struct EnergyTracePoint {
    int pulse_index = 0;
    double time = 0.0; // units of T_rev
    double energy = 0.0;
    double absorbed = 0.0;
};

struct EnergyTrace {
    std::vector<EnergyTracePoint> points;
};

/// Relative Raman line intensities, normalized to max 1.
struct RamanSpectrum {
    std::map<int, double> intensities;
};

PopulationDistribution populations(const WavePacket& state);

/// Sum of J(J+1) P_J, in units of B.
double rotational_energy(const PopulationDistribution& pop);

/// I_J ~ P_J^2, normalized to max 1. Optionally clipped at a noise floor
/// (applied to P_J before squaring).
RamanSpectrum raman_forward(const PopulationDistribution& pop,
                            std::optional<double> noise_floor = std::nullopt);

/// P_J ~ sqrt(I_J), renormalized; the experimental retrieval direction.
PopulationDistribution retrieve_populations(const RamanSpectrum& spectrum);

/// (E1 - E2) / ((E1 + E2)/2).
double degree_of_control(double e1, double e2);

/// 1 / sum P_J^2; effective number of populated levels.
double participation_ratio(const PopulationDistribution& pop);

/// First pulse index after which the least-squares energy slope of the
/// remaining tail stays below slope_tolerance times the initial 3-kick slope.
std::optional<int> break_time_estimate(const EnergyTrace& trace, double slope_tolerance);

} // namespace qkr

#endif
