#ifndef QKR_ROTOR_HPP
#define QKR_ROTOR_HPP

#include <optional>
#include <vector>

#include "qkr/basis.hpp"

namespace qkr {

/// One laser kick. Times and widths are in units of T_rev, strength P is
/// dimensionless. No fwhm means a delta-kick.
struct PulseSpec {
    double time = 0.0;
    double strength = 0.0;
    std::optional<double> fwhm;

    bool is_delta() const { return !fwhm.has_value(); }
};

/// Time-ordered kick sequence.
class PulseTrain {
  public:
    PulseTrain() = default;
    explicit PulseTrain(std::vector<PulseSpec> pulses);

    /// n pulses at t = 0, T, 2T, ... with uniform strength.
    static PulseTrain periodic(int n, double period, double strength,
                               std::optional<double> fwhm = std::nullopt);

    /// Two-part control structure: n_pre preparation kicks at period
    /// T_pre, then after a delay measured from the last preparation kick,
    /// n_loc localizing kicks at period T_loc.
    static PulseTrain control_train(int n_pre, double period_pre, double delay,
                                    int n_loc, double period_loc,
                                    double strength_pre, double strength_loc,
                                    std::optional<double> fwhm = std::nullopt);

    const std::vector<PulseSpec>& pulses() const { return pulses_; }
    int size() const { return static_cast<int>(pulses_.size()); }
    bool all_delta() const;

  private:
    std::vector<PulseSpec> pulses_;
};

/// <J', m| cos^2(theta) |J, m> over the basis: real symmetric, banded with
/// couplings only at dJ = 0, +-2.
RealMatrix cos2_matrix(const RotorBasis& basis);

/// Single closed-form matrix element (dJ = J' - J in {0, +-2}, else 0).
double cos2_element(int j_prime, int j, int m);

/// U = exp(+i P cos^2 theta), built per parity block from the cached
/// eigendecomposition of the cos^2 matrix.
class KickOperator {
  public:
    KickOperator(const RotorBasis& basis, double strength);

    const RotorBasis& basis() const { return basis_; }
    double strength() const { return strength_; }
    const ComplexMatrix& matrix() const { return matrix_; }

    ComplexVector apply(const ComplexVector& amps) const { return matrix_ * amps; }

  private:
    RotorBasis basis_;
    double strength_;
    ComplexMatrix matrix_;
};

KickOperator kick_operator(const RotorBasis& basis, double strength);

/// Diagonal of the free propagator over dt (units of T_rev):
/// exp(-i pi J(J+1) dt) per basis state.
ComplexVector free_phases(const RotorBasis& basis, double dt);

/// Applies free evolution over dt in place.
void free_evolve(WavePacket& state, double dt);

struct PropagationOptions {
    /// Error out when the top two J levels carry more population than this.
    double leak_threshold = 1e-6;
    /// Split-step size for finite-width pulses (units of T_rev); <= fwhm/4.
    double finite_pulse_dt = 0.0;
};

struct Trajectory {
    /// snapshots[0] is the initial state, snapshots[k] the state just after
    /// pulse k (for finite pulses: at the end of the envelope window).
    std::vector<WavePacket> snapshots;
    std::vector<double> times;
};

/// Delta-kick train propagation: free evolution between kicks, one unitary
/// per kick. Throws WrongModelError if any pulse has a finite width.
Trajectory propagate_delta_train(const WavePacket& state, const PulseTrain& train,
                                 const PropagationOptions& opts = {});

/// Split-step propagation of a single finite-width pulse with a Gaussian
/// intensity envelope truncated at +-3 fwhm. The envelope weights are
/// renormalized so the integrated kick strength equals pulse.strength.
/// Returns the state at the end of the envelope window.
WavePacket propagate_finite_pulse(const WavePacket& state, const PulseSpec& pulse,
                                  double dt);

/// Mixed train propagation: dispatches per pulse on delta vs finite width.
Trajectory propagate_train(const WavePacket& state, const PulseTrain& train,
                           const PropagationOptions& opts = {});

struct ResonanceDistance {
    int p = 0;
    int q = 1;
    double distance = 0.0;
};

/// Nearest rational p/q (q <= q_max) to a train period in units of T_rev.
ResonanceDistance resonance_distance(double period, int q_max);

} // namespace qkr

#endif
