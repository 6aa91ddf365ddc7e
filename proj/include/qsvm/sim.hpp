#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qsvm {

// Conventions used everywhere:
//  - qubit 0 is the least significant bit of the basis index;
//  - bitstrings render qubit n-1 leftmost ("q3 q2 q1 q0");
//  - state equality is up to global phase, aligned on the
//    largest-magnitude amplitude (see equal_up_to_global_phase).

using Amplitude = std::complex<double>;

constexpr int kMaxQubits = 12;        // dense simulation capacity
constexpr int kMaxUnitaryQubits = 6;  // dense-matrix oracle capacity

/// Dense state vector over n qubits; 2^n amplitudes.
struct QuantumState {
    int n_qubits = 0;
    std::vector<Amplitude> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
};

/// |00..0> on n qubits, 1 <= n <= 12.
QuantumState new_state(int n_qubits);

double norm_squared(const QuantumState& state);

bool equal_up_to_global_phase(const QuantumState& a, const QuantumState& b,
                              double tol = 1e-10);

enum class GateKind { U3, RY, RX, RZ, H, X, GlobalPhase };

/// Control qubit with polarity: anti=false acts on |1>, anti=true on |0>.
struct Control {
    int qubit = 0;
    bool anti = false;
};

/// One gate: a parameterized 2x2 unitary on `target`, optionally conditioned
/// on control qubits. GlobalPhase is e^{i theta} * I2 on its target, so its
/// controlled form is the usual phase gate on the control subspace; the
/// target only anchors the op.
struct GateOp {
    GateKind kind = GateKind::X;
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    int target = 0;
    std::vector<Control> controls;
};

// Gate factories.
GateOp u3(double theta, double phi, double lambda, int target);
GateOp ry(double theta, int target);
GateOp rx(double theta, int target);
GateOp rz(double theta, int target);
GateOp h(int target);
GateOp x(int target);
GateOp global_phase(double theta, int anchor = 0);
GateOp with_control(GateOp g, int qubit, bool anti = false);

/// 2x2 matrix of the gate body (controls excluded), row-major.
std::array<Amplitude, 4> gate_matrix(const GateOp& g);

GateOp adjoint(const GateOp& g);

/// Ordered gate list over a fixed-width register.
struct Circuit {
    int n_qubits = 0;
    std::vector<GateOp> ops;
};

/// Throws IndexError if any op references a qubit out of range, repeats a
/// control, or controls on its own target.
void validate(const Circuit& circuit);

QuantumState apply_gate(const QuantumState& state, const GateOp& gate);
QuantumState apply_circuit(const QuantumState& state, const Circuit& circuit);

/// Reversed gate list with each gate inverted; composing a circuit with its
/// adjoint is the identity action.
Circuit adjoint(const Circuit& circuit);

/// Append `src` onto `dst`, relocating qubit i of src to qubit_map[i].
void append_mapped(Circuit& dst, const Circuit& src,
                   const std::vector<int>& qubit_map);

/// Copy of `circuit` with extra controls attached to every op.
Circuit with_controls(const Circuit& circuit, const std::vector<Control>& extra);

/// Born-rule probability of an outcome pattern. The pattern has one char per
/// qubit, qubit n-1 leftmost: '0', '1', or '*' (wildcard, summed over).
double outcome_probability(const QuantumState& state, std::string_view pattern);

/// Render basis index as a bitstring, qubit n-1 leftmost.
std::string basis_label(std::uint64_t index, int n_qubits);

/// True if the bitstring label matches a '0'/'1'/'*' pattern of equal length.
bool label_matches(std::string_view label, std::string_view pattern);

struct ShotCounts {
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;
};

/// Terminal measurement of the full register, `shots` times. Identical
/// (state, shots, seed) triples give identical counts on every platform.
ShotCounts sample_counts(const QuantumState& state, std::uint64_t shots,
                         std::uint64_t seed);

/// Small dense complex matrix, row-major.
struct ComplexMatrix {
    int dim = 0;
    std::vector<Amplitude> a;

    explicit ComplexMatrix(int d = 0) : dim(d), a(std::size_t(d) * d) {}
    Amplitude& at(int r, int c) { return a[std::size_t(r) * dim + c]; }
    const Amplitude& at(int r, int c) const { return a[std::size_t(r) * dim + c]; }
};

ComplexMatrix matmul(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
QuantumState matvec(const ComplexMatrix& m, const QuantumState& v);

/// Brute-force 2^n x 2^n unitary of a circuit (n <= 6). Built from per-gate
/// dense matrices and matrix products, independent of apply_circuit, so the
/// two routes can check each other.
ComplexMatrix circuit_unitary(const Circuit& circuit);

} // namespace qsvm
