#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "qsvm/encoding.hpp"
#include "qsvm/sim.hpp"

namespace qsvm {

/// LS-SVM system matrix for two unit-norm training vectors with offset b
/// fixed to 0: F = c1*I + c2*X with c1 = 1 + 1/gamma and c2 = k12.
/// Eigenvalues are c1 +- c2 with eigenvectors |+> and |->.
struct FMatrix {
    double k11 = 1.0;
    double k12 = 0.0;
    double k22 = 1.0;
    double gamma = 2.0;
    double c1 = 1.5;
    double c2 = 0.0;

    double lambda_plus() const { return c1 + c2; }   // eigenvalue of |+>
    double lambda_minus() const { return c1 - c2; }  // eigenvalue of |->
    double lambda_min() const { return c1 - std::abs(c2); }
    double lambda_max() const { return c1 + std::abs(c2); }
};

/// Dot-product kernel.
double kernel(const FeatureVector& a, const FeatureVector& b);

FMatrix build_f_matrix(const FeatureVector& train1, const FeatureVector& train2,
                       double gamma);

/// One-qubit evolution e^{i F t} as [RX(-2*c2*t), GlobalPhase(c1*t)].
/// The explicit phase op keeps controlled embeddings phase-correct; on its
/// own it is an unobservable global phase.
Circuit f_evolution(const FMatrix& f, double t);

/// Quantum Fourier transform on n qubits (includes the bit-reversal swaps),
/// matching the DFT matrix in the simulator's LSB-first basis indexing.
Circuit qft_circuit(int n_qubits);

struct HhlConfig {
    int clock_qubits = 2;
    double t0 = 1.5707963267948966;  // pi/2
    /// Eigenvalue-rotation constant C; empty selects lambda_min/sqrt(2),
    /// which keeps both readout branches populated (see qsvm_circuit).
    std::optional<double> rotation_constant;
    bool post_select = true;

    double resolve_rotation_constant(const FMatrix& f) const;
};

/// Matrix-inversion subcircuit over {input q0, clock q1..qT, ancilla last}:
/// clock Hadamards, controlled e^{i F t0 2^k} powers, inverse QFT, an
/// ancilla RY(2*asin(C/lambda(m))) per nonzero clock value m, then the
/// uncompute of the first three steps. With exactly representable
/// eigenphases, conditioning on ancilla=1 (clock returns to all-zeros)
/// leaves the input qubit in a state proportional to F^-1 * input.
Circuit hhl_subcircuit(const FMatrix& f, const HhlConfig& cfg);

/// SVM weights from the b = 0 reduction: alpha = F^-1 * y.
struct SvmSolution {
    std::array<double, 2> alpha{0.0, 0.0};
    double b_offset = 0.0;
};

SvmSolution solve_ls_svm(const FMatrix& f, const std::array<double, 2>& y);

/// Two-training-vector model: state preparations, unit-norm vectors, class
/// labels, the F matrix, and the fixed right-hand side y = (+1, -1).
struct TrainedModel {
    Circuit train1_circuit;
    Circuit train2_circuit;
    FeatureVector train1_vector;
    FeatureVector train2_vector;
    std::array<int, 2> labels{0, 1};
    FMatrix f;
    std::array<double, 2> y{1.0, -1.0};
};

/// Builds the model from unit-norm training vectors (2 or 4 features).
TrainedModel make_model(const FeatureVector& train1, const FeatureVector& train2,
                        const std::array<int, 2>& labels, double gamma);

struct Classification {
    int label = 0;
    double score = 0.0;
    bool tie = false;
};

/// sign(alpha1*(x1.t) + alpha2*(x2.t)); a zero score sets the tie flag and
/// defaults to train1's class.
Classification classify_analytic(const SvmSolution& sol, const TrainedModel& model,
                                 const FeatureVector& test);

/// Full classifier circuit. Register layout: index qubit 0, data qubits
/// 1..d, clock, then one ancilla shared by the eigenvalue rotation and the
/// readout (5 qubits total for the 2-feature configuration). Structure:
/// index preparation RY encoding y = (1,-1); hhl_subcircuit; then, keyed on
/// the ancilla's rotated branch, the training-data oracle (anti-controlled
/// train1, controlled train2), the adjoint of the test preparation, and a
/// Hadamard on the index; finally H on the ancilla so the readout
/// probabilities carry the sign of the overlap.
Circuit qsvm_circuit(const TrainedModel& model, const Circuit& test_prep,
                     const HhlConfig& hhl);

struct QsvmResult {
    int label = 0;
    double score = 0.0;
    bool tie = false;
    /// Probability of the conditioning event the score is computed on.
    double success_probability = 0.0;
};

/// Runs the circuit on |0..0> and extracts the signed readout: the ancilla
/// Z-expectation conditioned on index+data all-zeros, and on clock all-zeros
/// when post_select is set. `shots` empty means exact probabilities.
QsvmResult classify_qsvm(const TrainedModel& model, const FeatureVector& test,
                         const HhlConfig& hhl,
                         std::optional<std::uint64_t> shots, std::uint64_t seed);

} // namespace qsvm
