#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "qsvm/encoding.hpp"
#include "qsvm/rng.hpp"
#include "qsvm/sim.hpp"

namespace test_support {

inline std::filesystem::path data_dir() { return QSVM_DATA_DIR; }

inline std::filesystem::path six_nine_path() {
    return data_dir() / "six_nine.csv";
}
inline std::filesystem::path banknote_path() {
    return data_dir() / "banknote_synthetic.csv";
}

/// Uniform angle in [-2pi, 2pi].
inline double random_angle(qsvm::Rng& rng) {
    return (rng.uniform() * 2.0 - 1.0) * 2.0 * std::numbers::pi;
}

/// Random circuit with controlled/anti-controlled gates of every kind.
inline qsvm::Circuit random_circuit(qsvm::Rng& rng, int n_qubits, int n_gates) {
    using qsvm::GateKind;
    qsvm::Circuit c;
    c.n_qubits = n_qubits;
    const GateKind kinds[] = {GateKind::U3, GateKind::RY, GateKind::RX,
                              GateKind::RZ, GateKind::H,  GateKind::X,
                              GateKind::GlobalPhase};
    for (int g = 0; g < n_gates; ++g) {
        qsvm::GateOp op;
        op.kind = kinds[rng.below(7)];
        op.theta = random_angle(rng);
        op.phi = random_angle(rng);
        op.lambda = random_angle(rng);
        op.target = int(rng.below(std::uint64_t(n_qubits)));
        if (n_qubits > 1 && rng.uniform() < 0.5) {
            const int max_controls = std::min(2, n_qubits - 1);
            const int n_controls = 1 + int(rng.below(std::uint64_t(max_controls)));
            std::vector<int> pool;
            for (int q = 0; q < n_qubits; ++q)
                if (q != op.target) pool.push_back(q);
            for (int k = 0; k < n_controls; ++k) {
                const auto pick = rng.below(pool.size());
                op.controls.push_back(
                    {pool[pick], rng.uniform() < 0.5});
                pool.erase(pool.begin() + long(pick));
            }
        }
        c.ops.push_back(op);
    }
    return c;
}

/// Random normalized complex state.
inline qsvm::QuantumState random_state(qsvm::Rng& rng, int n_qubits) {
    qsvm::QuantumState s = qsvm::new_state(n_qubits);
    double norm2 = 0.0;
    for (auto& a : s.amplitudes) {
        a = qsvm::Amplitude{rng.uniform() * 2.0 - 1.0, rng.uniform() * 2.0 - 1.0};
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : s.amplitudes) a *= inv;
    return s;
}

/// Random unit vector with signed entries.
inline qsvm::FeatureVector random_unit_vector(qsvm::Rng& rng, int dim) {
    qsvm::FeatureVector v;
    v.values.resize(std::size_t(dim));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& x : v.values) {
            x = rng.uniform() * 2.0 - 1.0;
            norm2 += x * x;
        }
    } while (norm2 < 1e-12);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v.values) x *= inv;
    return v;
}

inline double max_elementwise_error(const qsvm::QuantumState& a,
                                    const qsvm::QuantumState& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        worst = std::max(worst, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    return worst;
}

} // namespace test_support
