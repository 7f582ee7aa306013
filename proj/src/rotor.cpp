#include "qkr/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

namespace qkr {

namespace {

// <J+1, m| cos(theta) |J, m>
double cos_coupling(int j, int m) {
    const double num = double(j + 1) * (j + 1) - double(m) * m;
    if (num <= 0.0) return 0.0;
    return std::sqrt(num / (double(2 * j + 1) * (2 * j + 3)));
}

// Eigendecomposition of one parity block of the cos^2 matrix.
struct Cos2Block {
    std::vector<int> indices; // positions within the owning basis
    Eigen::VectorXd evals;
    RealMatrix evecs;
};

using BlockSet = std::vector<Cos2Block>;

std::shared_ptr<const BlockSet> cos2_blocks(const RotorBasis& basis) {
    using Key = std::tuple<int, int, int>;
    static std::map<Key, std::shared_ptr<const BlockSet>> cache;
    static std::mutex cache_mutex;

    const Key key{basis.j_max(), basis.m(), static_cast<int>(basis.parity())};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    // dJ = +-2 coupling keeps even-J and odd-J sectors closed; diagonalize
    // each sector on its own so cross-sector entries stay exactly zero.
    auto blocks = std::make_shared<BlockSet>();
    for (int sector = 0; sector < 2; ++sector) {
        Cos2Block block;
        for (int i = 0; i < basis.size(); ++i)
            if (basis.j_values()[i] % 2 == sector) block.indices.push_back(i);
        if (block.indices.empty()) continue;

        const int n = static_cast<int>(block.indices.size());
        RealMatrix sub(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                sub(a, b) = cos2_element(basis.j_values()[block.indices[a]],
                                         basis.j_values()[block.indices[b]], basis.m());

        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sub);
        if (solver.info() != Eigen::Success)
            throw NumericalError("cos^2 eigendecomposition failed (n=" +
                                 std::to_string(n) + ", m=" + std::to_string(basis.m()) + ")");
        block.evals = solver.eigenvalues();
        block.evecs = solver.eigenvectors();
        blocks->push_back(std::move(block));
    }

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, blocks);
    return blocks;
}

// amps <- exp(i * strength * C) amps, block by block.
void apply_kick_phase(const BlockSet& blocks, double strength, ComplexVector& amps) {
    for (const auto& block : blocks) {
        const int n = static_cast<int>(block.indices.size());
        ComplexVector sub(n);
        for (int a = 0; a < n; ++a) sub(a) = amps(block.indices[a]);
        ComplexVector modes = block.evecs.transpose() * sub;
        for (int a = 0; a < n; ++a)
            modes(a) *= std::polar(1.0, strength * block.evals(a));
        sub = block.evecs * modes;
        for (int a = 0; a < n; ++a) amps(block.indices[a]) = sub(a);
    }
}

void check_leak(const WavePacket& state, double threshold) {
    const int n = state.basis().size();
    double top = std::norm(state.amplitudes()(n - 1));
    if (n >= 2) top += std::norm(state.amplitudes()(n - 2));
    if (top > threshold)
        throw TruncationLeakError(
            "population " + std::to_string(top) + " in the top two J levels exceeds " +
            std::to_string(threshold) + "; raise j_max (current " +
            std::to_string(state.basis().j_max()) + ")");
}

} // namespace

PulseTrain::PulseTrain(std::vector<PulseSpec> pulses) : pulses_(std::move(pulses)) {
    for (size_t i = 0; i < pulses_.size(); ++i) {
        const auto& p = pulses_[i];
        if (p.time < 0.0) throw DomainError("pulse time must be non-negative");
        if (!(p.strength >= 0.0) || !std::isfinite(p.strength))
            throw DomainError("pulse strength must be finite and >= 0");
        if (p.fwhm && *p.fwhm <= 0.0) throw DomainError("pulse fwhm must be > 0");
        if (i > 0 && p.time < pulses_[i - 1].time)
            throw DomainError("pulse times must be non-decreasing");
    }
}

PulseTrain PulseTrain::periodic(int n, double period, double strength,
                                std::optional<double> fwhm) {
    if (n < 0) throw DomainError("pulse count must be >= 0");
    if (period <= 0.0) throw DomainError("train period must be > 0");
    std::vector<PulseSpec> pulses;
    pulses.reserve(n);
    for (int k = 0; k < n; ++k) pulses.push_back({k * period, strength, fwhm});
    return PulseTrain(std::move(pulses));
}

PulseTrain PulseTrain::control_train(int n_pre, double period_pre, double delay,
                                     int n_loc, double period_loc,
                                     double strength_pre, double strength_loc,
                                     std::optional<double> fwhm) {
    if (n_pre < 0 || n_loc < 0) throw DomainError("pulse counts must be >= 0");
    if ((n_pre > 1 && period_pre <= 0.0) || (n_loc > 1 && period_loc <= 0.0))
        throw DomainError("train periods must be > 0");
    if (n_loc > 0 && n_pre > 0 && delay <= 0.0)
        throw DomainError("inter-train delay must be > 0");
    std::vector<PulseSpec> pulses;
    pulses.reserve(n_pre + n_loc);
    for (int k = 0; k < n_pre; ++k) pulses.push_back({k * period_pre, strength_pre, fwhm});
    const double t0 = (n_pre > 0 ? (n_pre - 1) * period_pre + delay : 0.0);
    for (int k = 0; k < n_loc; ++k) pulses.push_back({t0 + k * period_loc, strength_loc, fwhm});
    return PulseTrain(std::move(pulses));
}

bool PulseTrain::all_delta() const {
    return std::all_of(pulses_.begin(), pulses_.end(),
                       [](const PulseSpec& p) { return p.is_delta(); });
}

double cos2_element(int j_prime, int j, int m) {
    if (j_prime < j) std::swap(j_prime, j);
    const int m_abs = std::abs(m);
    if (j < m_abs || j_prime < m_abs) return 0.0;
    if (j_prime == j) {
        const double up = cos_coupling(j, m);
        const double down = (j >= 1) ? cos_coupling(j - 1, m) : 0.0;
        return up * up + down * down;
    }
    if (j_prime == j + 2) return cos_coupling(j, m) * cos_coupling(j + 1, m);
    return 0.0;
}

RealMatrix cos2_matrix(const RotorBasis& basis) {
    const int n = basis.size();
    RealMatrix mat = RealMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            mat(a, b) = cos2_element(basis.j_values()[a], basis.j_values()[b], basis.m());
    return mat;
}

KickOperator::KickOperator(const RotorBasis& basis, double strength)
    : basis_(basis), strength_(strength) {
    if (!(strength >= 0.0) || !std::isfinite(strength))
        throw DomainError("kick strength must be finite and >= 0");
    const auto blocks = cos2_blocks(basis);
    matrix_ = ComplexMatrix::Zero(basis.size(), basis.size());
    for (const auto& block : *blocks) {
        const int n = static_cast<int>(block.indices.size());
        ComplexMatrix sub = block.evecs.cast<Complex>() *
                            (block.evals.array() * strength)
                                .unaryExpr([](double x) { return std::polar(1.0, x); })
                                .matrix()
                                .asDiagonal() *
                            block.evecs.transpose().cast<Complex>();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                matrix_(block.indices[a], block.indices[b]) = sub(a, b);
    }
}

KickOperator kick_operator(const RotorBasis& basis, double strength) {
    return KickOperator(basis, strength);
}

ComplexVector free_phases(const RotorBasis& basis, double dt) {
    if (!std::isfinite(dt)) throw DomainError("dt must be finite");
    ComplexVector phases(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
        const double j = basis.j_values()[i];
        phases(i) = std::polar(1.0, -std::numbers::pi * j * (j + 1.0) * dt);
    }
    return phases;
}

void free_evolve(WavePacket& state, double dt) {
    state.set_amplitudes(free_phases(state.basis(), dt).cwiseProduct(state.amplitudes()));
}

Trajectory propagate_delta_train(const WavePacket& state, const PulseTrain& train,
                                 const PropagationOptions& opts) {
    if (!train.all_delta())
        throw WrongModelError(
            "train contains finite-width pulses; use propagate_finite_pulse / propagate_train");
    return propagate_train(state, train, opts);
}

WavePacket propagate_finite_pulse(const WavePacket& state, const PulseSpec& pulse,
                                  double dt) {
    if (!pulse.fwhm)
        throw WrongModelError("pulse has no fwhm; use the delta-kick propagator");
    const double w = *pulse.fwhm;
    if (dt <= 0.0) throw DomainError("split-step dt must be > 0");
    if (dt > w / 4.0)
        throw DomainError("split-step dt=" + std::to_string(dt) +
                          " too coarse for fwhm=" + std::to_string(w) +
                          " (need dt <= fwhm/4)");

    const double window = 6.0 * w; // +-3 fwhm
    const int n_steps = std::max(1, static_cast<int>(std::ceil(window / dt)));
    const double h = window / n_steps;

    // Gaussian intensity envelope sampled at step centers, renormalized so
    // the impulses sum exactly to pulse.strength.
    std::vector<double> weights(n_steps);
    double total = 0.0;
    const double four_ln2 = 4.0 * std::numbers::ln2;
    for (int k = 0; k < n_steps; ++k) {
        const double t = -3.0 * w + (k + 0.5) * h;
        weights[k] = std::exp(-four_ln2 * t * t / (w * w));
        total += weights[k];
    }
    for (double& g : weights) g /= total;

    const auto blocks = cos2_blocks(state.basis());
    ComplexVector amps = state.amplitudes();
    const ComplexVector half = free_phases(state.basis(), h / 2.0);
    for (int k = 0; k < n_steps; ++k) {
        amps = half.cwiseProduct(amps);
        apply_kick_phase(*blocks, pulse.strength * weights[k], amps);
        amps = half.cwiseProduct(amps);
    }
    WavePacket out = state;
    out.set_amplitudes(std::move(amps));
    return out;
}

Trajectory propagate_train(const WavePacket& state, const PulseTrain& train,
                           const PropagationOptions& opts) {
    Trajectory traj;
    traj.snapshots.push_back(state);
    traj.times.push_back(0.0);

    WavePacket current = state;
    double cursor = 0.0;
    // A finite first pulse may be centered at t = 0; let its envelope start
    // before the nominal time origin instead of calling that an overlap.
    const auto& pulses = train.pulses();
    if (!pulses.empty() && !pulses.front().is_delta())
        cursor = std::min(0.0, pulses.front().time - 3.0 * *pulses.front().fwhm);
    std::map<double, KickOperator> delta_ops;

    for (const auto& pulse : train.pulses()) {
        if (pulse.is_delta()) {
            free_evolve(current, pulse.time - cursor);
            auto it = delta_ops.find(pulse.strength);
            if (it == delta_ops.end())
                it = delta_ops.emplace(pulse.strength,
                                       KickOperator(current.basis(), pulse.strength)).first;
            current.set_amplitudes(it->second.apply(current.amplitudes()));
            cursor = pulse.time;
        } else {
            const double w = *pulse.fwhm;
            const double start = pulse.time - 3.0 * w;
            if (start < cursor - 1e-12)
                throw DomainError("finite-pulse envelope windows overlap");
            free_evolve(current, start - cursor);
            double dt = opts.finite_pulse_dt;
            if (dt <= 0.0) dt = w / 16.0;
            current = propagate_finite_pulse(current, pulse, dt);
            cursor = pulse.time + 3.0 * w;
        }
        check_leak(current, opts.leak_threshold);
        traj.snapshots.push_back(current);
        traj.times.push_back(cursor);
    }
    return traj;
}

ResonanceDistance resonance_distance(double period, int q_max) {
    if (period <= 0.0) throw DomainError("period must be > 0");
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    ResonanceDistance best{0, 1, std::abs(period)};
    for (int q = 1; q <= q_max; ++q) {
        const int p = std::max(0, static_cast<int>(std::llround(period * q)));
        const double d = std::abs(period - double(p) / q);
        if (d < best.distance - 1e-15) best = {p, q, d};
    }
    return best;
}

} // namespace qkr
