#ifndef QKR_BASIS_HPP
#define QKR_BASIS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qkr/errors.hpp"

namespace qkr {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

enum class Parity { EvenJ, OddJ, Both };

/// Truncated angular-momentum basis at fixed m, optionally restricted to one
/// J parity. J runs over max(|m|, parity floor) .. j_max.
class RotorBasis {
  public:
    RotorBasis(int j_max, Parity parity, int m);

    int j_max() const { return j_max_; }
    int m() const { return m_; }
    Parity parity() const { return parity_; }
    const std::vector<int>& j_values() const { return j_values_; }
    int size() const { return static_cast<int>(j_values_.size()); }

    /// Index of J in this basis, or -1 if absent.
    int index_of(int j) const;

    bool operator==(const RotorBasis& other) const {
        return j_max_ == other.j_max_ && m_ == other.m_ && parity_ == other.parity_;
    }

  private:
    int j_max_;
    int m_;
    Parity parity_;
    std::vector<int> j_values_;
};

RotorBasis build_basis(int j_max, Parity parity, int m);

/// Complex amplitudes over a RotorBasis; always unit norm.
class WavePacket {
  public:
    WavePacket(RotorBasis basis, ComplexVector amplitudes);

    /// Pure |J0, m0> state.
    static WavePacket pure(const RotorBasis& basis, int j0);

    const RotorBasis& basis() const { return basis_; }
    const ComplexVector& amplitudes() const { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

    /// Replaces the amplitude vector; throws if the norm drifted past 1e-10.
    void set_amplitudes(ComplexVector amps);

  private:
    RotorBasis basis_;
    ComplexVector amplitudes_;
};

} // namespace qkr

#endif
