#ifndef QKR_ENSEMBLES_HPP
#define QKR_ENSEMBLES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qkr/basis.hpp"

namespace qkr {

/// Molecular constants. B in cm^-1, polarizability anisotropy in Angstrom^3.
struct MoleculeSpec {
    std::string name;
    double B_cm = 0.0;
    double spin_weight_even = 0.0;
    double spin_weight_odd = 0.0;
    std::optional<double> polarizability_anisotropy_A3;

    void validate() const;

    /// Revival period 1/(2Bc) in seconds.
    double revival_period_s() const;

    /// Which J parity carries any weight at all.
    Parity allowed_parity() const;
};

/// Built-in catalog: O2 (odd J only) and N2 (even:odd = 2:1).
MoleculeSpec molecule_by_name(const std::string& name);

struct EnsembleMember {
    double weight = 0.0;
    int j0 = 0;
    int m0 = 0;
};

/// Boltzmann x spin-statistics mixture of pure |J0, m0> initial states.
struct ThermalEnsemble {
    std::vector<EnsembleMember> members;
    double temperature_K = 0.0;

    double total_weight() const;
    /// Weight per J level (summed over m).
    std::map<int, double> j_weights() const;
};

/// Thermal mixture for a molecule: w_J ~ g_J (2J+1) exp(-B J(J+1) hc / kT),
/// normalized, truncated once the discarded tail is below weight_cutoff,
/// then split equally over the 2J+1 m sublevels.
ThermalEnsemble boltzmann_ensemble(const MoleculeSpec& molecule, double temperature_K,
                                   double weight_cutoff = 1e-6);

/// P = dalpha/(4 hbar) * integral of E^2(t) dt. The anisotropy is a
/// polarizability volume in Angstrom^3 (multiply by 4 pi eps0 x 1e-30 for SI);
/// the field integral is in V^2 s / m^2.
double kick_strength_from_pulse(double polarizability_anisotropy_A3,
                                double field_squared_time_integral_SI);

/// Weighted sum of per-member observable vectors, in fixed member order.
/// Every nonzero-weight member must be present.
std::vector<double> ensemble_average(
    const ThermalEnsemble& ensemble,
    const std::map<std::pair<int, int>, std::vector<double>>& per_member);

} // namespace qkr

#endif
