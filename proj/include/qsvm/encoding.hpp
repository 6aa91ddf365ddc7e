#pragma once

#include <optional>
#include <vector>

#include "qsvm/sim.hpp"

namespace qsvm {

/// Classical feature vector, optionally labeled with its class (0 or 1).
struct FeatureVector {
    std::vector<double> values;
    std::optional<int> label;
};

/// v / ||v||_2. All-zero input throws DegenerateVectorError.
FeatureVector normalize(const FeatureVector& v);

double l2_norm(const FeatureVector& v);

/// Rotation angle 2*atan2(beta, alpha), so RY(angle)|0> has amplitudes
/// (alpha, beta) for a unit input. Two-argument arctangent keeps the signs
/// of both components; a plain ratio would not.
double angle2(double alpha, double beta);

/// Single-RY preparation of a unit 2-vector on one qubit.
Circuit encode2(const FeatureVector& v);

/// Angle convention for the third (controlled) rotation of encode4:
/// StateMatched picks 2*atan2(delta, gamma) so the |1>-branch lands exactly
/// on (gamma, delta)/r; ArgSwapped is the transposed-ratio variant
/// 2*atan2(gamma, delta), kept for comparison. Only StateMatched satisfies
/// the round-trip contract for generic vectors.
enum class ThirdAngleMode { StateMatched, ArgSwapped };

/// Two-qubit preparation of a unit 4-vector (alpha, beta, gamma, delta):
/// a branch rotation on qubit 1 splits the amplitude between the halves,
/// then an anti-controlled rotation prepares (alpha, beta) on qubit 0 when
/// the branch is |0> and a controlled rotation prepares (gamma, delta) when
/// it is |1>. All gates are real (phi = lambda = 0), so the prepared
/// amplitudes equal the input entries exactly, signs included.
Circuit encode4(const FeatureVector& v,
                ThirdAngleMode mode = ThirdAngleMode::StateMatched);

} // namespace qsvm
