#include "qkr/basis.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace qkr {

RotorBasis::RotorBasis(int j_max, Parity parity, int m)
    : j_max_(j_max), m_(m), parity_(parity) {
    const int m_abs = std::abs(m);
    if (j_max < m_abs)
        throw DomainError("invalid basis: j_max=" + std::to_string(j_max) +
                          " < |m|=" + std::to_string(m_abs));
    for (int j = m_abs; j <= j_max; ++j) {
        const bool even = (j % 2 == 0);
        if (parity == Parity::EvenJ && !even) continue;
        if (parity == Parity::OddJ && even) continue;
        j_values_.push_back(j);
    }
    if (j_values_.empty())
        throw DomainError("invalid basis: empty after parity filter (j_max=" +
                          std::to_string(j_max) + ", m=" + std::to_string(m) + ")");
}

int RotorBasis::index_of(int j) const {
    for (int i = 0; i < size(); ++i)
        if (j_values_[i] == j) return i;
    return -1;
}

RotorBasis build_basis(int j_max, Parity parity, int m) {
    return RotorBasis(j_max, parity, m);
}

WavePacket::WavePacket(RotorBasis basis, ComplexVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != basis_.size())
        throw DomainError("wave packet length does not match basis size");
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-10)
        throw DomainError("wave packet is not normalized");
}

WavePacket WavePacket::pure(const RotorBasis& basis, int j0) {
    const int idx = basis.index_of(j0);
    if (idx < 0)
        throw DomainError("J=" + std::to_string(j0) + " not in basis");
    ComplexVector amps = ComplexVector::Zero(basis.size());
    amps(idx) = 1.0;
    return WavePacket(basis, std::move(amps));
}

void WavePacket::set_amplitudes(ComplexVector amps) {
    if (amps.size() != basis_.size())
        throw DomainError("amplitude vector length does not match basis size");
    if (std::abs(amps.norm() - 1.0) > 1e-10)
        throw NumericalError("norm drift exceeded 1e-10 during propagation");
    amplitudes_ = std::move(amps);
}

} // namespace qkr
