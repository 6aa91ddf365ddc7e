#include "qsvm/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qsvm/errors.hpp"

namespace qsvm {

namespace {
constexpr double kUnitNormTol = 1e-9;
constexpr double kStarvedThreshold = 1e-6;
// scores this close to zero count as ties; keeps mathematically tied cases
// from being split by the last bit of a probability
constexpr double kTieTolerance = 1e-12;

/// Append `src` relocated through `qubit_map`, then attach `extra` controls
/// expressed in the destination frame.
void append_mapped_controlled(Circuit& dst, const Circuit& src,
                              const std::vector<int>& qubit_map,
                              const std::vector<Control>& extra) {
    Circuit mapped;
    mapped.n_qubits = dst.n_qubits;
    append_mapped(mapped, src, qubit_map);
    const Circuit keyed = with_controls(mapped, extra);
    dst.ops.insert(dst.ops.end(), keyed.ops.begin(), keyed.ops.end());
}

} // namespace

double kernel(const FeatureVector& a, const FeatureVector& b) {
    if (a.values.size() != b.values.size())
        throw ShapeError("kernel: length mismatch (" +
                         std::to_string(a.values.size()) + " vs " +
                         std::to_string(b.values.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += a.values[i] * b.values[i];
    return s;
}

FMatrix build_f_matrix(const FeatureVector& train1, const FeatureVector& train2,
                       double gamma) {
    if (gamma <= 0.0)
        throw PreconditionError("build_f_matrix: gamma must be positive");
    if (std::abs(l2_norm(train1) - 1.0) > kUnitNormTol ||
        std::abs(l2_norm(train2) - 1.0) > kUnitNormTol)
        throw PreconditionError("build_f_matrix: training vectors must be "
                                "unit norm");
    FMatrix f;
    f.gamma = gamma;
    f.k11 = kernel(train1, train1);
    f.k22 = kernel(train2, train2);
    f.k12 = kernel(train1, train2);
    f.c1 = 1.0 + 1.0 / gamma;
    f.c2 = f.k12;
    if (f.lambda_min() <= 0.0)
        throw SingularMatrixError("build_f_matrix: F is not invertible "
                                  "(|k12| >= 1 + 1/gamma)");
    return f;
}

Circuit f_evolution(const FMatrix& f, double t) {
    Circuit c;
    c.n_qubits = 1;
    c.ops.push_back(rx(-2.0 * f.c2 * t, 0));
    c.ops.push_back(global_phase(f.c1 * t, 0));
    return c;
}

Circuit qft_circuit(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw CapacityError("qft_circuit: bad qubit count");
    Circuit c;
    c.n_qubits = n_qubits;
    for (int k = n_qubits - 1; k >= 0; --k) {
        c.ops.push_back(h(k));
        for (int j = k - 1; j >= 0; --j) {
            // controlled phase pi/2^(k-j) as U3(0,0,theta) with a control
            const double theta = std::numbers::pi / double(1 << (k - j));
            c.ops.push_back(with_control(u3(0.0, 0.0, theta, k), j));
        }
    }
    for (int i = 0; i < n_qubits / 2; ++i) {
        const int a = i;
        const int b = n_qubits - 1 - i;
        c.ops.push_back(with_control(x(a), b));
        c.ops.push_back(with_control(x(b), a));
        c.ops.push_back(with_control(x(a), b));
    }
    return c;
}

double HhlConfig::resolve_rotation_constant(const FMatrix& f) const {
    const double lam_min = f.lambda_min();
    if (!rotation_constant) return lam_min / std::numbers::sqrt2;
    const double c = *rotation_constant;
    if (c <= 0.0)
        throw PreconditionError("HhlConfig: rotation constant must be positive");
    if (c > lam_min + 1e-12)
        throw InvalidRotationError(
            "HhlConfig: rotation constant exceeds the smallest eigenvalue");
    return c;
}

Circuit hhl_subcircuit(const FMatrix& f, const HhlConfig& cfg) {
    if (cfg.clock_qubits < 1)
        throw PreconditionError("hhl_subcircuit: need at least one clock qubit");
    if (cfg.t0 <= 0.0)
        throw ConfigError("hhl_subcircuit: t0 must be positive");
    const double two_pi = 2.0 * std::numbers::pi;
    const double phase_max = f.lambda_max() * cfg.t0 / two_pi;
    if (phase_max >= 1.0 || f.lambda_min() * cfg.t0 <= 0.0)
        throw ConfigError("hhl_subcircuit: eigenphase overflow; shrink t0");
    const double c_rot = cfg.resolve_rotation_constant(f);

    const int t = cfg.clock_qubits;
    const int q_in = 0;
    const int q_anc = 1 + t;
    Circuit circ;
    circ.n_qubits = t + 2;

    // phase estimation: clock Hadamards, controlled evolution powers,
    // inverse QFT on the clock
    Circuit pe;
    pe.n_qubits = circ.n_qubits;
    for (int k = 0; k < t; ++k) pe.ops.push_back(h(1 + k));
    for (int k = 0; k < t; ++k)
        append_mapped_controlled(pe, f_evolution(f, cfg.t0 * double(1 << k)),
                                 {q_in}, {Control{1 + k, false}});
    {
        std::vector<int> clock_map(static_cast<std::size_t>(t));
        for (int k = 0; k < t; ++k) clock_map[std::size_t(k)] = 1 + k;
        append_mapped(pe, adjoint(qft_circuit(t)), clock_map);
    }

    circ.ops = pe.ops;

    // eigenvalue rotation: for each nonzero clock value m, rotate the
    // ancilla by 2*asin(C/lambda(m)); the ratio is clamped so clock values
    // below C (unpopulated in exact configurations) stay well-formed
    for (int m = 1; m < (1 << t); ++m) {
        const double lambda_m = two_pi * double(m) / (double(1 << t) * cfg.t0);
        const double ratio = std::min(1.0, c_rot / lambda_m);
        GateOp rot = ry(2.0 * std::asin(ratio), q_anc);
        for (int k = 0; k < t; ++k)
            rot.controls.push_back(Control{1 + k, ((m >> k) & 1) == 0});
        circ.ops.push_back(rot);
    }

    const Circuit unpe = adjoint(pe);
    circ.ops.insert(circ.ops.end(), unpe.ops.begin(), unpe.ops.end());
    return circ;
}

SvmSolution solve_ls_svm(const FMatrix& f, const std::array<double, 2>& y) {
    const double det = f.c1 * f.c1 - f.c2 * f.c2;
    if (std::abs(det) < 1e-12)
        throw SingularMatrixError("solve_ls_svm: F is singular");
    SvmSolution sol;
    sol.alpha[0] = (f.c1 * y[0] - f.c2 * y[1]) / det;
    sol.alpha[1] = (-f.c2 * y[0] + f.c1 * y[1]) / det;
    const double r0 = f.c1 * sol.alpha[0] + f.c2 * sol.alpha[1] - y[0];
    const double r1 = f.c2 * sol.alpha[0] + f.c1 * sol.alpha[1] - y[1];
    if (std::sqrt(r0 * r0 + r1 * r1) > 1e-12)
        throw NumericError("solve_ls_svm: residual above tolerance");
    return sol;
}

TrainedModel make_model(const FeatureVector& train1, const FeatureVector& train2,
                        const std::array<int, 2>& labels, double gamma) {
    TrainedModel m;
    m.train1_vector = train1;
    m.train2_vector = train2;
    m.labels = labels;
    m.f = build_f_matrix(train1, train2, gamma);
    const auto encode = [](const FeatureVector& v) {
        return v.values.size() == 2 ? encode2(v) : encode4(v);
    };
    if (train1.values.size() != train2.values.size())
        throw ShapeError("make_model: training vectors differ in length");
    m.train1_circuit = encode(train1);
    m.train2_circuit = encode(train2);
    return m;
}

Classification classify_analytic(const SvmSolution& sol, const TrainedModel& model,
                                 const FeatureVector& test) {
    if (std::abs(l2_norm(test) - 1.0) > kUnitNormTol)
        throw PreconditionError("classify_analytic: test vector must be unit norm");
    const double score = sol.alpha[0] * kernel(model.train1_vector, test) +
                         sol.alpha[1] * kernel(model.train2_vector, test) +
                         sol.b_offset;
    Classification out;
    out.score = score;
    out.tie = std::abs(score) <= kTieTolerance;
    out.label = !out.tie && score < 0.0 ? model.labels[1] : model.labels[0];
    return out;
}

Circuit qsvm_circuit(const TrainedModel& model, const Circuit& test_prep,
                     const HhlConfig& hhl) {
    const int d = model.train1_circuit.n_qubits;
    if (test_prep.n_qubits != d || model.train2_circuit.n_qubits != d)
        throw ShapeError("qsvm_circuit: register mismatch between training and "
                         "test preparations");
    const int t = hhl.clock_qubits;
    const int q_idx = 0;
    const int q_anc = 1 + d + t;
    Circuit circ;
    circ.n_qubits = q_anc + 1;

    std::vector<int> data_map(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) data_map[std::size_t(i)] = 1 + i;
    std::vector<int> hhl_map(static_cast<std::size_t>(t + 2));
    hhl_map[0] = q_idx;
    for (int k = 0; k < t; ++k) hhl_map[std::size_t(1 + k)] = 1 + d + k;
    hhl_map[std::size_t(t + 1)] = q_anc;

    // index register holds the signed class weights: |0,y> for y = (1,-1)
    circ.ops.push_back(ry(angle2(model.y[0], model.y[1]), q_idx));
    append_mapped(circ, hhl_subcircuit(model.f, hhl), hhl_map);

    // oracle plus query, keyed on the ancilla's rotated branch; the trailing
    // index Hadamard realizes the uniform index part of the query state
    Circuit block;
    block.n_qubits = circ.n_qubits;
    append_mapped_controlled(block, model.train1_circuit, data_map,
                             {Control{q_idx, true}});
    append_mapped_controlled(block, model.train2_circuit, data_map,
                             {Control{q_idx, false}});
    append_mapped(block, adjoint(test_prep), data_map);
    block.ops.push_back(h(q_idx));
    const Circuit keyed = with_controls(block, {Control{q_anc, false}});
    circ.ops.insert(circ.ops.end(), keyed.ops.begin(), keyed.ops.end());

    circ.ops.push_back(h(q_anc));
    return circ;
}

QsvmResult classify_qsvm(const TrainedModel& model, const FeatureVector& test,
                         const HhlConfig& hhl,
                         std::optional<std::uint64_t> shots, std::uint64_t seed) {
    if (std::abs(l2_norm(test) - 1.0) > kUnitNormTol)
        throw PreconditionError("classify_qsvm: test vector must be unit norm");
    if (test.values.size() != model.train1_vector.values.size())
        throw ShapeError("classify_qsvm: test length does not match model");
    const Circuit test_prep =
        test.values.size() == 2 ? encode2(test) : encode4(test);
    const Circuit circ = qsvm_circuit(model, test_prep, hhl);
    const QuantumState final_state =
        apply_circuit(new_state(circ.n_qubits), circ);

    // outcome patterns, qubit n-1 leftmost: [ancilla][clock][data][index]
    const int d = test_prep.n_qubits;
    const int t = hhl.clock_qubits;
    const std::string clock_part(std::size_t(t), hhl.post_select ? '0' : '*');
    const std::string zeros(std::size_t(d) + 1, '0');
    const std::string pattern0 = "0" + clock_part + zeros;
    const std::string pattern1 = "1" + clock_part + zeros;

    QsvmResult out;
    double p0 = 0.0;
    double p1 = 0.0;
    if (!shots) {
        p0 = outcome_probability(final_state, pattern0);
        p1 = outcome_probability(final_state, pattern1);
        const double den = p0 + p1;
        out.success_probability = den;
        if (den < kStarvedThreshold)
            throw StarvedPostSelectionError(
                "classify_qsvm: post-selection success probability below 1e-6");
        out.score = (p0 - p1) / den;
    } else {
        const ShotCounts counts = sample_counts(final_state, *shots, seed);
        std::uint64_t n0 = 0;
        std::uint64_t n1 = 0;
        for (const auto& [label, n] : counts.counts) {
            if (label_matches(label, pattern0)) n0 += n;
            if (label_matches(label, pattern1)) n1 += n;
        }
        const std::uint64_t den = n0 + n1;
        out.success_probability = double(den) / double(*shots);
        out.score = den == 0 ? 0.0
                             : (double(n0) - double(n1)) / double(den);
    }
    out.tie = std::abs(out.score) <= kTieTolerance;
    out.label = !out.tie && out.score < 0.0 ? model.labels[1] : model.labels[0];
    return out;
}

} // namespace qsvm
