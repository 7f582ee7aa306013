#include "qkr/observables.hpp"

#include <algorithm>
#include <cmath>

#include "qkr/errors.hpp"

namespace qkr {

double PopulationDistribution::total() const {
    double sum = 0.0;
    for (const auto& [j, p] : entries) sum += p;
    return sum;
}

void PopulationDistribution::validate() const {
    for (const auto& [j, p] : entries)
        if (p < 0.0) throw DomainError("negative population at J=" + std::to_string(j));
    if (std::abs(total() - 1.0) > 1e-10)
        throw DomainError("population distribution is not normalized");
}

PopulationDistribution populations(const WavePacket& state) {
    PopulationDistribution pop;
    const auto& js = state.basis().j_values();
    for (int i = 0; i < state.basis().size(); ++i)
        pop.entries[js[i]] = std::norm(state.amplitudes()(i));
    return pop;
}

double rotational_energy(const PopulationDistribution& pop) {
    double e = 0.0;
    for (const auto& [j, p] : pop.entries) e += double(j) * (j + 1.0) * p;
    return e;
}

RamanSpectrum raman_forward(const PopulationDistribution& pop,
                            std::optional<double> noise_floor) {
    RamanSpectrum spec;
    double max_i = 0.0;
    for (const auto& [j, p] : pop.entries) {
        double pj = p;
        if (noise_floor && pj < *noise_floor) pj = 0.0;
        const double ij = pj * pj;
        spec.intensities[j] = ij;
        max_i = std::max(max_i, ij);
    }
    if (max_i <= 0.0) throw DomainError("all populations zero (or below the noise floor)");
    for (auto& [j, i] : spec.intensities) i /= max_i;
    return spec;
}

PopulationDistribution retrieve_populations(const RamanSpectrum& spectrum) {
    PopulationDistribution pop;
    double sum = 0.0;
    for (const auto& [j, i] : spectrum.intensities) {
        if (i < 0.0) throw DomainError("negative Raman intensity at J=" + std::to_string(j));
        const double pj = std::sqrt(i);
        pop.entries[j] = pj;
        sum += pj;
    }
    if (sum <= 0.0) throw DomainError("all Raman intensities zero");
    for (auto& [j, p] : pop.entries) p /= sum;
    return pop;
}

double degree_of_control(double e1, double e2) {
    if (!(e1 + e2 > 0.0)) throw DomainError("degree of control requires E1 + E2 > 0");
    return (e1 - e2) / ((e1 + e2) / 2.0);
}

double participation_ratio(const PopulationDistribution& pop) {
    double sum_sq = 0.0;
    for (const auto& [j, p] : pop.entries) sum_sq += p * p;
    if (sum_sq <= 0.0) throw DomainError("empty distribution");
    return 1.0 / sum_sq;
}

namespace {

// Least-squares slope of energy vs pulse index over [first, last].
double slope(const EnergyTrace& trace, int first, int last) {
    const int n = last - first + 1;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = first; i <= last; ++i) {
        const double x = trace.points[i].pulse_index;
        const double y = trace.points[i].energy;
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

} // namespace

std::optional<int> break_time_estimate(const EnergyTrace& trace, double slope_tolerance) {
    const int n = static_cast<int>(trace.points.size());
    if (n < 4) throw DomainError("break time estimate needs at least 4 trace points");
    const double initial = slope(trace, 0, 3);
    for (int k = 0; k + 1 < n; ++k) {
        if (slope(trace, k, n - 1) <= slope_tolerance * initial)
            return trace.points[k].pulse_index;
    }
    return std::nullopt;
}

} // namespace qkr
