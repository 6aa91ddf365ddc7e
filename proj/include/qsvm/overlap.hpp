#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qsvm/sim.hpp"

namespace qsvm {

/// All-zeros probability of a composed overlap circuit: |<psi_train|psi_test>|^2
/// at one layer. std_error is sqrt(p(1-p)/shots) in shot mode, 0 in exact mode.
struct OverlapEstimate {
    double p_hat = 0.0;
    std::optional<std::uint64_t> shots;  // empty = exact
    double std_error = 0.0;
};

/// (adjoint(train_prep) . test_prep) repeated `layers` times, applied
/// left-to-right starting from test_prep. Layer 1 is the plain composed
/// overlap circuit.
Circuit build_overlap_circuit(const Circuit& train_prep, const Circuit& test_prep,
                              int layers);

OverlapEstimate estimate_overlap(const Circuit& circuit,
                                 std::optional<std::uint64_t> shots,
                                 std::uint64_t seed);

struct InnerprodResult {
    int label = 0;
    double p1 = 0.0;
    double p2 = 0.0;
    bool tie = false;
};

/// Larger-overlap rule: the test point takes the class of the training
/// preparation with the larger all-zeros probability; equal overlaps set the
/// tie flag and default to train1's class. The two estimates use seeds
/// derived from `seed` at fixed streams so their shot noise is independent.
InnerprodResult classify_innerprod(const Circuit& train1_prep,
                                   const Circuit& train2_prep,
                                   const Circuit& test_prep, int layers,
                                   std::optional<std::uint64_t> shots,
                                   std::uint64_t seed,
                                   const std::array<int, 2>& labels = {0, 1});

struct LayerAccuracy {
    int layer = 0;
    double accuracy = 0.0;
};

/// One accuracy per layer in [layer_from, layer_to] over labeled test
/// preparations. Deterministic for a fixed seed.
std::vector<LayerAccuracy> layer_sweep(
    const Circuit& train1_prep, const Circuit& train2_prep,
    const std::vector<std::pair<Circuit, int>>& tests, int layer_from,
    int layer_to, std::optional<std::uint64_t> shots, std::uint64_t seed,
    const std::array<int, 2>& labels = {0, 1});

} // namespace qsvm
