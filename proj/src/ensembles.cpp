#include "qkr/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "qkr/constants.hpp"
#include "qkr/errors.hpp"

namespace qkr {

void MoleculeSpec::validate() const {
    if (!(B_cm > 0.0)) throw DomainError("molecule B must be > 0");
    if (spin_weight_even < 0.0 || spin_weight_odd < 0.0)
        throw DomainError("spin weights must be >= 0");
    if (spin_weight_even == 0.0 && spin_weight_odd == 0.0)
        throw DomainError("at least one spin weight must be positive");
}

double MoleculeSpec::revival_period_s() const {
    return 1.0 / (2.0 * B_cm * constants::c_light_cm);
}

Parity MoleculeSpec::allowed_parity() const {
    if (spin_weight_even == 0.0) return Parity::OddJ;
    if (spin_weight_odd == 0.0) return Parity::EvenJ;
    return Parity::Both;
}

MoleculeSpec molecule_by_name(const std::string& name) {
    if (name == "O2") return {"O2", 1.4377, 0.0, 1.0, 1.1};
    if (name == "N2") return {"N2", 1.9896, 2.0, 1.0, 0.93};
    throw ConfigError("unknown molecule '" + name + "' (catalog: O2, N2)");
}

double ThermalEnsemble::total_weight() const {
    double sum = 0.0;
    for (const auto& m : members) sum += m.weight;
    return sum;
}

std::map<int, double> ThermalEnsemble::j_weights() const {
    std::map<int, double> out;
    for (const auto& m : members) out[m.j0] += m.weight;
    return out;
}

ThermalEnsemble boltzmann_ensemble(const MoleculeSpec& molecule, double temperature_K,
                                   double weight_cutoff) {
    molecule.validate();
    if (temperature_K < 0.0) throw DomainError("temperature must be >= 0");
    if (!(weight_cutoff > 0.0 && weight_cutoff < 1.0))
        throw DomainError("weight_cutoff must be in (0, 1)");

    auto spin_weight = [&](int j) {
        return (j % 2 == 0) ? molecule.spin_weight_even : molecule.spin_weight_odd;
    };

    ThermalEnsemble ens;
    ens.temperature_K = temperature_K;

    if (temperature_K == 0.0) {
        int j0 = 0;
        while (spin_weight(j0) == 0.0) ++j0;
        for (int m = -j0; m <= j0; ++m)
            ens.members.push_back({1.0 / (2 * j0 + 1), j0, m});
        return ens;
    }

    // Raw weights until the running tail estimate drops below the cutoff.
    // The termination bound ignores spin statistics so the zero weight of a
    // forbidden parity (e.g. even J in O2) cannot end the series early.
    const double beta = molecule.B_cm * constants::hc_over_kB_cmK / temperature_K;
    const double g_max = std::max(molecule.spin_weight_even, molecule.spin_weight_odd);
    std::vector<double> w;
    double sum = 0.0;
    int j = 0;
    for (;; ++j) {
        const double wj = spin_weight(j) * (2 * j + 1) * std::exp(-beta * j * (j + 1.0));
        const double bound = g_max * (2 * j + 1) * std::exp(-beta * j * (j + 1.0));
        w.push_back(wj);
        sum += wj;
        if (j * (j + 1.0) * beta > 3.0 && bound < weight_cutoff * sum) break;
        if (j > 10000) throw NumericalError("Boltzmann series failed to converge");
    }
    if (sum <= 0.0) throw DomainError("degenerate ensemble: all weights zero");

    // Drop the smallest-weight tail while the discarded mass stays below the
    // cutoff, then renormalize.
    int j_top = static_cast<int>(w.size()) - 1;
    double discarded = 0.0;
    while (j_top > 0 && discarded + w[j_top] < weight_cutoff * sum)
        discarded += w[j_top--];

    double kept = 0.0;
    for (int jj = 0; jj <= j_top; ++jj) kept += w[jj];
    for (int jj = 0; jj <= j_top; ++jj) {
        if (w[jj] == 0.0) continue;
        const double wj = w[jj] / kept;
        for (int m = -jj; m <= jj; ++m)
            ens.members.push_back({wj / (2 * jj + 1), jj, m});
    }
    return ens;
}

double kick_strength_from_pulse(double polarizability_anisotropy_A3,
                                double field_squared_time_integral_SI) {
    if (polarizability_anisotropy_A3 < 0.0 || field_squared_time_integral_SI < 0.0)
        throw DomainError("kick strength inputs must be >= 0");
    // Polarizability volume (A^3) -> SI polarizability: 4 pi eps0 * 1e-30 m^3.
    const double dalpha_SI =
        4.0 * std::numbers::pi * constants::epsilon0 * polarizability_anisotropy_A3 * 1e-30;
    return dalpha_SI / (4.0 * constants::hbar) * field_squared_time_integral_SI;
}

std::vector<double> ensemble_average(
    const ThermalEnsemble& ensemble,
    const std::map<std::pair<int, int>, std::vector<double>>& per_member) {
    std::vector<double> out;
    for (const auto& member : ensemble.members) {
        if (member.weight == 0.0) continue;
        auto it = per_member.find({member.j0, member.m0});
        if (it == per_member.end())
            throw IncompleteEnsembleError("missing result for member (J0=" +
                                          std::to_string(member.j0) + ", m0=" +
                                          std::to_string(member.m0) + ")");
        const auto& vec = it->second;
        if (out.empty()) out.assign(vec.size(), 0.0);
        if (vec.size() != out.size())
            throw DomainError("per-member observable vectors differ in length");
        for (size_t i = 0; i < vec.size(); ++i) out[i] += member.weight * vec[i];
    }
    return out;
}

} // namespace qkr
