#include "qsvm/overlap.hpp"

#include <cmath>
#include <string>

#include "qsvm/errors.hpp"
#include "qsvm/rng.hpp"

namespace qsvm {

Circuit build_overlap_circuit(const Circuit& train_prep, const Circuit& test_prep,
                              int layers) {
    if (train_prep.n_qubits != test_prep.n_qubits)
        throw ShapeError("build_overlap_circuit: qubit count mismatch");
    if (layers < 1)
        throw PreconditionError("build_overlap_circuit: layers must be >= 1");
    Circuit out;
    out.n_qubits = test_prep.n_qubits;
    const Circuit undo = adjoint(train_prep);
    for (int l = 0; l < layers; ++l) {
        out.ops.insert(out.ops.end(), test_prep.ops.begin(), test_prep.ops.end());
        out.ops.insert(out.ops.end(), undo.ops.begin(), undo.ops.end());
    }
    return out;
}

OverlapEstimate estimate_overlap(const Circuit& circuit,
                                 std::optional<std::uint64_t> shots,
                                 std::uint64_t seed) {
    const QuantumState state = apply_circuit(new_state(circuit.n_qubits), circuit);
    const std::string all_zeros(std::size_t(circuit.n_qubits), '0');
    OverlapEstimate out;
    out.shots = shots;
    if (!shots) {
        out.p_hat = outcome_probability(state, all_zeros);
        out.std_error = 0.0;
        return out;
    }
    const ShotCounts counts = sample_counts(state, *shots, seed);
    const auto it = counts.counts.find(all_zeros);
    const std::uint64_t n = it == counts.counts.end() ? 0 : it->second;
    out.p_hat = double(n) / double(*shots);
    out.std_error = std::sqrt(out.p_hat * (1.0 - out.p_hat) / double(*shots));
    return out;
}

InnerprodResult classify_innerprod(const Circuit& train1_prep,
                                   const Circuit& train2_prep,
                                   const Circuit& test_prep, int layers,
                                   std::optional<std::uint64_t> shots,
                                   std::uint64_t seed,
                                   const std::array<int, 2>& labels) {
    const auto c1 = build_overlap_circuit(train1_prep, test_prep, layers);
    const auto c2 = build_overlap_circuit(train2_prep, test_prep, layers);
    InnerprodResult out;
    out.p1 = estimate_overlap(c1, shots, derive_seed(seed, 0)).p_hat;
    out.p2 = estimate_overlap(c2, shots, derive_seed(seed, 1)).p_hat;
    // ties are declared inside a float-roundoff band so a mathematically
    // equal pair cannot be split by the last bit of a probability
    out.tie = std::abs(out.p1 - out.p2) <= 1e-12;
    out.label = !out.tie && out.p2 > out.p1 ? labels[1] : labels[0];
    return out;
}

std::vector<LayerAccuracy> layer_sweep(
    const Circuit& train1_prep, const Circuit& train2_prep,
    const std::vector<std::pair<Circuit, int>>& tests, int layer_from,
    int layer_to, std::optional<std::uint64_t> shots, std::uint64_t seed,
    const std::array<int, 2>& labels) {
    if (tests.empty()) throw PreconditionError("layer_sweep: no test points");
    if (layer_from < 1 || layer_to > 60 || layer_from > layer_to)
        throw PreconditionError("layer_sweep: layer range must sit inside "
                                "[1, 60]");
    std::vector<LayerAccuracy> series;
    series.reserve(std::size_t(layer_to - layer_from + 1));
    for (int layer = layer_from; layer <= layer_to; ++layer) {
        int correct = 0;
        for (std::size_t i = 0; i < tests.size(); ++i) {
            const auto point_seed =
                derive_seed(derive_seed(seed, std::uint64_t(layer)), i);
            const auto res =
                classify_innerprod(train1_prep, train2_prep, tests[i].first,
                                   layer, shots, point_seed, labels);
            if (res.label == tests[i].second) ++correct;
        }
        series.push_back(
            {layer, double(correct) / double(tests.size())});
    }
    return series;
}

} // namespace qsvm
