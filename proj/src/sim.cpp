#include "qsvm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qsvm/errors.hpp"
#include "qsvm/rng.hpp"

namespace qsvm {

QuantumState new_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw CapacityError("new_state: n_qubits must be in [1, " +
                            std::to_string(kMaxQubits) + "], got " +
                            std::to_string(n_qubits));
    QuantumState s;
    s.n_qubits = n_qubits;
    s.amplitudes.assign(std::size_t(1) << n_qubits, Amplitude{0.0, 0.0});
    s.amplitudes[0] = Amplitude{1.0, 0.0};
    return s;
}

double norm_squared(const QuantumState& state) {
    double total = 0.0;
    for (const auto& a : state.amplitudes) total += std::norm(a);
    return total;
}

bool equal_up_to_global_phase(const QuantumState& a, const QuantumState& b,
                              double tol) {
    if (a.n_qubits != b.n_qubits) return false;
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double m = std::abs(a.amplitudes[i]);
        if (m > best) {
            best = m;
            pivot = i;
        }
    }
    if (best < tol) return norm_squared(b) < tol;
    if (std::abs(b.amplitudes[pivot]) < tol) return false;
    // phase that aligns b's pivot amplitude onto a's
    const Amplitude phase = a.amplitudes[pivot] / b.amplitudes[pivot];
    const double mag = std::abs(phase);
    if (std::abs(mag - 1.0) > tol) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (std::abs(a.amplitudes[i] - phase * b.amplitudes[i]) > tol)
            return false;
    return true;
}

GateOp u3(double theta, double phi, double lambda, int target) {
    return GateOp{GateKind::U3, theta, phi, lambda, target, {}};
}
GateOp ry(double theta, int target) {
    return GateOp{GateKind::RY, theta, 0.0, 0.0, target, {}};
}
GateOp rx(double theta, int target) {
    return GateOp{GateKind::RX, theta, 0.0, 0.0, target, {}};
}
GateOp rz(double theta, int target) {
    return GateOp{GateKind::RZ, theta, 0.0, 0.0, target, {}};
}
GateOp h(int target) { return GateOp{GateKind::H, 0.0, 0.0, 0.0, target, {}}; }
GateOp x(int target) { return GateOp{GateKind::X, 0.0, 0.0, 0.0, target, {}}; }
GateOp global_phase(double theta, int anchor) {
    return GateOp{GateKind::GlobalPhase, theta, 0.0, 0.0, anchor, {}};
}
GateOp with_control(GateOp g, int qubit, bool anti) {
    g.controls.push_back(Control{qubit, anti});
    return g;
}

std::array<Amplitude, 4> gate_matrix(const GateOp& g) {
    const double c = std::cos(g.theta / 2.0);
    const double s = std::sin(g.theta / 2.0);
    const Amplitude i1{0.0, 1.0};
    switch (g.kind) {
        case GateKind::U3:
            return {Amplitude{c, 0.0}, -std::exp(i1 * g.lambda) * s,
                    std::exp(i1 * g.phi) * s,
                    std::exp(i1 * (g.phi + g.lambda)) * c};
        case GateKind::RY:
            return {Amplitude{c, 0.0}, Amplitude{-s, 0.0}, Amplitude{s, 0.0},
                    Amplitude{c, 0.0}};
        case GateKind::RX:
            return {Amplitude{c, 0.0}, -i1 * s, -i1 * s, Amplitude{c, 0.0}};
        case GateKind::RZ:
            return {std::exp(-i1 * (g.theta / 2.0)), Amplitude{0.0, 0.0},
                    Amplitude{0.0, 0.0}, std::exp(i1 * (g.theta / 2.0))};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {Amplitude{r, 0.0}, Amplitude{r, 0.0}, Amplitude{r, 0.0},
                    Amplitude{-r, 0.0}};
        }
        case GateKind::X:
            return {Amplitude{0.0, 0.0}, Amplitude{1.0, 0.0},
                    Amplitude{1.0, 0.0}, Amplitude{0.0, 0.0}};
        case GateKind::GlobalPhase: {
            const Amplitude p = std::exp(i1 * g.theta);
            return {p, Amplitude{0.0, 0.0}, Amplitude{0.0, 0.0}, p};
        }
    }
    throw Error("gate_matrix: unknown gate kind");
}

GateOp adjoint(const GateOp& g) {
    GateOp out = g;
    switch (g.kind) {
        case GateKind::U3:
            out.theta = -g.theta;
            out.phi = -g.lambda;
            out.lambda = -g.phi;
            break;
        case GateKind::RY:
        case GateKind::RX:
        case GateKind::RZ:
        case GateKind::GlobalPhase:
            out.theta = -g.theta;
            break;
        case GateKind::H:
        case GateKind::X:
            break;
    }
    return out;
}

namespace {

void check_gate_indices(const GateOp& g, int n_qubits) {
    if (g.target < 0 || g.target >= n_qubits)
        throw IndexError("gate target " + std::to_string(g.target) +
                         " out of range for " + std::to_string(n_qubits) +
                         " qubits");
    for (std::size_t i = 0; i < g.controls.size(); ++i) {
        const int q = g.controls[i].qubit;
        if (q < 0 || q >= n_qubits)
            throw IndexError("control qubit " + std::to_string(q) +
                             " out of range");
        if (q == g.target)
            throw IndexError("control qubit " + std::to_string(q) +
                             " equals gate target");
        for (std::size_t j = i + 1; j < g.controls.size(); ++j)
            if (g.controls[j].qubit == q)
                throw IndexError("duplicate control qubit " + std::to_string(q));
    }
}

bool controls_satisfied(const GateOp& g, std::size_t basis_index) {
    for (const auto& c : g.controls) {
        const bool on = (basis_index >> c.qubit) & 1u;
        if (on == c.anti) return false;
    }
    return true;
}

} // namespace

void validate(const Circuit& circuit) {
    for (const auto& g : circuit.ops) check_gate_indices(g, circuit.n_qubits);
}

QuantumState apply_gate(const QuantumState& state, const GateOp& gate) {
    check_gate_indices(gate, state.n_qubits);
    const auto u = gate_matrix(gate);
    QuantumState out = state;
    const std::size_t tbit = std::size_t(1) << gate.target;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & tbit) continue;
        if (!controls_satisfied(gate, i)) continue;  // controls exclude target
        const std::size_t j = i | tbit;
        const Amplitude a = state.amplitudes[i];
        const Amplitude b = state.amplitudes[j];
        out.amplitudes[i] = u[0] * a + u[1] * b;
        out.amplitudes[j] = u[2] * a + u[3] * b;
    }
    return out;
}

QuantumState apply_circuit(const QuantumState& state, const Circuit& circuit) {
    if (circuit.n_qubits != state.n_qubits)
        throw ShapeError("apply_circuit: circuit has " +
                         std::to_string(circuit.n_qubits) + " qubits, state has " +
                         std::to_string(state.n_qubits));
    QuantumState out = state;
    for (const auto& g : circuit.ops) out = apply_gate(out, g);
    if (std::abs(norm_squared(out) - 1.0) > 1e-10)
        throw NumericError("apply_circuit: norm drifted beyond 1e-10");
    return out;
}

Circuit adjoint(const Circuit& circuit) {
    Circuit out;
    out.n_qubits = circuit.n_qubits;
    out.ops.reserve(circuit.ops.size());
    for (auto it = circuit.ops.rbegin(); it != circuit.ops.rend(); ++it)
        out.ops.push_back(adjoint(*it));
    return out;
}

void append_mapped(Circuit& dst, const Circuit& src,
                   const std::vector<int>& qubit_map) {
    if (qubit_map.size() != std::size_t(src.n_qubits))
        throw ShapeError("append_mapped: qubit_map size mismatch");
    for (const auto& g : src.ops) {
        GateOp moved = g;
        moved.target = qubit_map.at(g.target);
        for (auto& c : moved.controls) c.qubit = qubit_map.at(c.qubit);
        dst.ops.push_back(std::move(moved));
    }
}

Circuit with_controls(const Circuit& circuit, const std::vector<Control>& extra) {
    Circuit out = circuit;
    for (auto& g : out.ops)
        g.controls.insert(g.controls.end(), extra.begin(), extra.end());
    return out;
}

namespace {

struct Pattern {
    std::size_t mask = 0;
    std::size_t value = 0;
};

Pattern parse_pattern(std::string_view pattern, int n_qubits) {
    if (pattern.size() != std::size_t(n_qubits))
        throw ParseError("pattern length " + std::to_string(pattern.size()) +
                         " does not match register width " +
                         std::to_string(n_qubits));
    Pattern p;
    for (int q = 0; q < n_qubits; ++q) {
        const char c = pattern[std::size_t(n_qubits - 1 - q)];
        if (c == '*') continue;
        if (c != '0' && c != '1')
            throw ParseError(std::string("pattern character '") + c +
                             "' is not one of 0, 1, *");
        p.mask |= std::size_t(1) << q;
        if (c == '1') p.value |= std::size_t(1) << q;
    }
    return p;
}

} // namespace

double outcome_probability(const QuantumState& state, std::string_view pattern) {
    const Pattern p = parse_pattern(pattern, state.n_qubits);
    double total = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i)
        if ((i & p.mask) == p.value) total += std::norm(state.amplitudes[i]);
    return total;
}

std::string basis_label(std::uint64_t index, int n_qubits) {
    std::string s(std::size_t(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if ((index >> q) & 1u) s[std::size_t(n_qubits - 1 - q)] = '1';
    return s;
}

bool label_matches(std::string_view label, std::string_view pattern) {
    if (label.size() != pattern.size()) return false;
    for (std::size_t i = 0; i < label.size(); ++i)
        if (pattern[i] != '*' && pattern[i] != label[i]) return false;
    return true;
}

ShotCounts sample_counts(const QuantumState& state, std::uint64_t shots,
                         std::uint64_t seed) {
    if (shots < 1) throw PreconditionError("sample_counts: shots must be >= 1");
    std::vector<double> cumulative(state.dim());
    double run = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        run += std::norm(state.amplitudes[i]);
        cumulative[i] = run;
    }
    cumulative.back() = 1.0;  // guard against rounding at the top end

    Rng rng(seed);
    std::vector<std::uint64_t> hits(state.dim(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        const auto it =
            std::upper_bound(cumulative.begin(), cumulative.end(), u);
        hits[std::size_t(it - cumulative.begin())]++;
    }
    ShotCounts out;
    out.shots = shots;
    for (std::size_t i = 0; i < hits.size(); ++i)
        if (hits[i] > 0) out.counts[basis_label(i, state.n_qubits)] = hits[i];
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.dim != rhs.dim) throw ShapeError("matmul: dimension mismatch");
    ComplexMatrix out(lhs.dim);
    for (int r = 0; r < lhs.dim; ++r)
        for (int k = 0; k < lhs.dim; ++k) {
            const Amplitude v = lhs.at(r, k);
            if (v == Amplitude{0.0, 0.0}) continue;
            for (int c = 0; c < lhs.dim; ++c) out.at(r, c) += v * rhs.at(k, c);
        }
    return out;
}

QuantumState matvec(const ComplexMatrix& m, const QuantumState& v) {
    if (std::size_t(m.dim) != v.dim()) throw ShapeError("matvec: dimension mismatch");
    QuantumState out = v;
    for (int r = 0; r < m.dim; ++r) {
        Amplitude acc{0.0, 0.0};
        for (int c = 0; c < m.dim; ++c) acc += m.at(r, c) * v.amplitudes[c];
        out.amplitudes[std::size_t(r)] = acc;
    }
    return out;
}

ComplexMatrix circuit_unitary(const Circuit& circuit) {
    if (circuit.n_qubits < 1 || circuit.n_qubits > kMaxUnitaryQubits)
        throw CapacityError("circuit_unitary: supports 1 to " +
                            std::to_string(kMaxUnitaryQubits) + " qubits");
    validate(circuit);
    const int dim = 1 << circuit.n_qubits;
    ComplexMatrix total(dim);
    for (int i = 0; i < dim; ++i) total.at(i, i) = 1.0;

    for (const auto& g : circuit.ops) {
        const auto u = gate_matrix(g);
        ComplexMatrix full(dim);
        const std::size_t tbit = std::size_t(1) << g.target;
        for (int col = 0; col < dim; ++col) {
            const auto ci = std::size_t(col);
            if (!controls_satisfied(g, ci)) {
                full.at(col, col) = 1.0;
                continue;
            }
            const int bit = (ci & tbit) ? 1 : 0;
            const int row0 = int(ci & ~tbit);
            const int row1 = int(ci | tbit);
            full.at(row0, col) = u[std::size_t(0 * 2 + bit)];
            full.at(row1, col) = u[std::size_t(1 * 2 + bit)];
        }
        total = matmul(full, total);
    }

    // U must be unitary: check U^dagger U = I.
    double worst = 0.0;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            Amplitude acc{0.0, 0.0};
            for (int k = 0; k < dim; ++k)
                acc += std::conj(total.at(k, r)) * total.at(k, c);
            const Amplitude want = (r == c) ? Amplitude{1.0, 0.0}
                                            : Amplitude{0.0, 0.0};
            worst = std::max(worst, std::abs(acc - want));
        }
    if (worst > 1e-10)
        throw NumericError("circuit_unitary: result fails unitarity check");
    return total;
}

} // namespace qsvm
