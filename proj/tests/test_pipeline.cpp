#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "qsvm/errors.hpp"
#include "qsvm/pipeline.hpp"
#include "qsvm/preprocess.hpp"
#include "test_support.hpp"

using namespace qsvm;
namespace ts = test_support;

namespace {

struct SixNine {
    FeatureVector train1;
    FeatureVector train2;
    std::vector<FeatureVector> tests;
};

SixNine load_six_nine() {
    const auto data = load_dataset(ts::six_nine_path(), 2);
    SixNine out;
    out.train1 = data.rows[0];
    out.train2 = data.rows[1];
    out.tests.assign(data.rows.begin() + 2, data.rows.end());
    return out;
}

/// Independent 2x2 inverse through the spectral decomposition in |+->.
std::array<double, 2> spectral_inverse(const FMatrix& f,
                                       const std::array<double, 2>& v) {
    const double plus = (v[0] + v[1]) / std::numbers::sqrt2;
    const double minus = (v[0] - v[1]) / std::numbers::sqrt2;
    const double wp = plus / f.lambda_plus();
    const double wm = minus / f.lambda_minus();
    return {(wp + wm) / std::numbers::sqrt2, (wp - wm) / std::numbers::sqrt2};
}

/// Post-selected HHL output on the input qubit (ancilla=1, clock all-zeros).
std::array<std::complex<double>, 2> hhl_post_selected(
    const FMatrix& f, const HhlConfig& cfg, const std::array<double, 2>& input) {
    const Circuit hhl = hhl_subcircuit(f, cfg);
    QuantumState s = new_state(hhl.n_qubits);
    s = apply_gate(s, ry(angle2(input[0], input[1]), 0));
    s = apply_circuit(s, hhl);
    const std::size_t anc_bit = std::size_t(1) << (hhl.n_qubits - 1);
    return {s.amplitudes[anc_bit], s.amplitudes[anc_bit | 1]};
}

void check_direction(const std::array<std::complex<double>, 2>& got,
                     std::array<double, 2> want, double tol) {
    double gn = std::sqrt(std::norm(got[0]) + std::norm(got[1]));
    double wn = std::hypot(want[0], want[1]);
    REQUIRE(gn > 1e-12);
    // align overall sign on the dominant component
    const int pivot = std::abs(want[0]) >= std::abs(want[1]) ? 0 : 1;
    const double gs = got[std::size_t(pivot)].real() < 0 ? -1.0 : 1.0;
    const double ws = want[std::size_t(pivot)] < 0 ? -1.0 : 1.0;
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(got[std::size_t(i)].imag()) / gn < tol);
        CHECK(std::abs(gs * got[std::size_t(i)].real() / gn -
                       ws * want[std::size_t(i)] / wn) < tol);
    }
}

} // namespace

TEST_CASE("kernel is the dot product; shipped six-nine values match") {
    const auto sn = load_six_nine();
    CHECK(std::abs(kernel(sn.train1, sn.train2) - 0.5) < 1e-9);
    CHECK(std::abs(kernel(sn.train1, sn.train1) - 1.0) < 1e-9);
    CHECK(std::abs(kernel(sn.train2, sn.train2) - 1.0) < 1e-9);
    CHECK(kernel({{1.0, 0.0}, {}}, {{0.0, 1.0}, {}}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(kernel({{1.0}, {}}, {{1.0, 0.0}, {}}), ShapeError);
}

TEST_CASE("build_f_matrix fills c1, c2 and the spectrum") {
    const auto sn = load_six_nine();
    SUBCASE("six-nine with gamma 2") {
        const auto f = build_f_matrix(sn.train1, sn.train2, 2.0);
        CHECK(f.c1 == doctest::Approx(1.5));
        CHECK(f.c2 == doctest::Approx(0.5));
        CHECK(f.lambda_plus() == doctest::Approx(2.0));
        CHECK(f.lambda_minus() == doctest::Approx(1.0));
    }
    SUBCASE("orthogonal trainings give a scaled identity") {
        const auto f = build_f_matrix({{1.0, 0.0}, {}}, {{0.0, 1.0}, {}}, 1.0);
        CHECK(f.c1 == doctest::Approx(2.0));
        CHECK(f.c2 == doctest::Approx(0.0));
    }
    SUBCASE("banknote k-means centers carry their dot product") {
        const auto data = load_dataset(ts::banknote_path(), 4);
        const auto parts = split(data, 28, 7);
        const auto km = kmeans(parts.train, 2, KMeansInit::ClassMeans, 7);
        const auto c0 = normalize(km.centers[0]);
        const auto c1 = normalize(km.centers[1]);
        const auto f = build_f_matrix(c0, c1, 2.0);
        CHECK(f.c2 == doctest::Approx(kernel(c0, c1)));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(build_f_matrix({{0.9, 0.1}, {}}, {{1.0, 0.0}, {}}, 2.0),
                        PreconditionError);
        CHECK_THROWS_AS(
            build_f_matrix({{1.0, 0.0}, {}}, {{0.0, 1.0}, {}}, -1.0),
            PreconditionError);
    }
}

TEST_CASE("f_evolution realizes exp(i F t) with its phase companion") {
    SUBCASE("zero coupling is a pure phase") {
        FMatrix f;
        f.c1 = 1.5;
        f.c2 = 0.0;
        const auto u = circuit_unitary(f_evolution(f, 0.8));
        CHECK(std::abs(u.at(0, 1)) < 1e-12);
        CHECK(std::abs(u.at(0, 0) - u.at(1, 1)) < 1e-12);
        CHECK(std::abs(std::abs(u.at(0, 0)) - 1.0) < 1e-12);
    }
    SUBCASE("c2 = 1/2 at t = pi sends |0> to i|1> up to the c1 phase") {
        FMatrix f;
        f.c1 = 1.5;
        f.c2 = 0.5;
        const double t = std::numbers::pi;
        const auto st = apply_circuit(new_state(1), f_evolution(f, t));
        const std::complex<double> c1_phase =
            std::exp(std::complex<double>{0.0, f.c1 * t});
        CHECK(std::abs(st.amplitudes[0]) < 1e-12);
        CHECK(std::abs(st.amplitudes[1] -
                       c1_phase * std::complex<double>{0.0, 1.0}) < 1e-12);
    }
    SUBCASE("controlled form imprints e^{i lambda t} on eigenvectors") {
        Rng rng(211);
        for (int trial = 0; trial < 25; ++trial) {
            FMatrix f;
            f.gamma = 0.5 + rng.uniform() * 4.0;
            f.c1 = 1.0 + 1.0 / f.gamma;
            f.c2 = rng.uniform() * 1.8 - 0.9;
            const double t = rng.uniform() * 2.0;
            for (const double sign : {1.0, -1.0}) {
                // (|0>+|1>)_ctrl/sqrt2 on qubit 1, |+> or |-> on qubit 0
                QuantumState s = new_state(2);
                s = apply_gate(s, h(1));
                if (sign < 0) s = apply_gate(s, x(0));
                s = apply_gate(s, h(0));
                Circuit mapped{2, {}};
                append_mapped(mapped, f_evolution(f, t), {0});
                const Circuit evo = with_controls(mapped, {{1, false}});
                const auto out = apply_circuit(s, evo);
                const double lambda = sign > 0 ? f.lambda_plus() : f.lambda_minus();
                const std::complex<double> want =
                    std::exp(std::complex<double>{0.0, lambda * t});
                // control=1 branch amplitudes vs the scalar phase
                CHECK(std::abs(out.amplitudes[2] - want * 0.5) < 1e-10);
                CHECK(std::abs(out.amplitudes[3] - sign * want * 0.5) < 1e-10);
            }
        }
    }
}

TEST_CASE("qft_circuit matches the DFT matrix") {
    for (int n = 1; n <= 3; ++n) {
        const auto u = circuit_unitary(qft_circuit(n));
        const int dim = 1 << n;
        const double root = 2.0 * std::numbers::pi / double(dim);
        double worst = 0.0;
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                const std::complex<double> want =
                    std::exp(std::complex<double>{0.0, root * double(r) * double(c)}) /
                    std::sqrt(double(dim));
                worst = std::max(worst, std::abs(u.at(r, c) - want));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("hhl_subcircuit inverts the six-nine F on its eigenbasis") {
    const auto sn = load_six_nine();
    const auto f = build_f_matrix(sn.train1, sn.train2, 2.0);
    HhlConfig cfg;  // clock 2, t0 pi/2, auto C

    SUBCASE("eigenvector passes through with amplitude C over lambda") {
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        const auto out = hhl_post_selected(f, cfg, {inv_sqrt2, inv_sqrt2});
        check_direction(out, {inv_sqrt2, inv_sqrt2}, 1e-9);
        const double c_rot = cfg.resolve_rotation_constant(f);
        const double got_norm = std::sqrt(std::norm(out[0]) + std::norm(out[1]));
        CHECK(got_norm == doctest::Approx(c_rot / f.lambda_plus()).epsilon(1e-9));
    }
    SUBCASE("|0,y> for y=(1,-1) stays on the minus eigenvector") {
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        const auto out = hhl_post_selected(f, cfg, {inv_sqrt2, -inv_sqrt2});
        check_direction(out, {inv_sqrt2, -inv_sqrt2}, 1e-9);
    }
    SUBCASE("|0> splits by inverse eigenvalues") {
        const auto out = hhl_post_selected(f, cfg, {1.0, 0.0});
        const auto want = spectral_inverse(f, {1.0, 0.0});
        check_direction(out, want, 1e-9);
    }
    SUBCASE("50 random real inputs against the spectral oracle") {
        Rng rng(307);
        for (int trial = 0; trial < 50; ++trial) {
            const auto v = ts::random_unit_vector(rng, 2);
            const auto out = hhl_post_selected(f, cfg, {v.values[0], v.values[1]});
            const auto want = spectral_inverse(f, {v.values[0], v.values[1]});
            check_direction(out, want, 1e-9);
        }
    }
    SUBCASE("rotation constant above lambda_min is rejected") {
        HhlConfig bad = cfg;
        bad.rotation_constant = f.lambda_min() * 1.01;
        CHECK_THROWS_AS(hhl_subcircuit(f, bad), InvalidRotationError);
    }
    SUBCASE("phase overflow is a configuration error") {
        HhlConfig bad = cfg;
        bad.t0 = 4.0;  // lambda_max * t0 / 2pi >= 1
        CHECK_THROWS_AS(hhl_subcircuit(f, bad), ConfigError);
    }
}

TEST_CASE("solve_ls_svm solves the two-by-two system") {
    FMatrix f;
    f.c1 = 1.5;
    f.c2 = 0.5;
    const auto sol = solve_ls_svm(f, {1.0, -1.0});
    CHECK(sol.alpha[0] == doctest::Approx(1.0));
    CHECK(sol.alpha[1] == doctest::Approx(-1.0));

    FMatrix diag;
    diag.c1 = 2.0;
    diag.c2 = 0.0;
    const auto sd = solve_ls_svm(diag, {1.0, -1.0});
    CHECK(sd.alpha[0] == doctest::Approx(0.5));
    CHECK(sd.alpha[1] == doctest::Approx(-0.5));

    const auto ss = solve_ls_svm(f, {1.0, 1.0});
    CHECK(ss.alpha[0] == doctest::Approx(0.5));
    CHECK(ss.alpha[1] == doctest::Approx(0.5));

    FMatrix singular;
    singular.c1 = 1.0;
    singular.c2 = 1.0;
    CHECK_THROWS_AS(solve_ls_svm(singular, {1.0, -1.0}), SingularMatrixError);
}

TEST_CASE("classify_analytic reproduces the sign rule") {
    const auto sn = load_six_nine();
    const auto model = make_model(sn.train1, sn.train2, {0, 1}, 2.0);
    const auto sol = solve_ls_svm(model.f, {model.y[0], model.y[1]});

    const auto self = classify_analytic(sol, model, sn.train1);
    CHECK(self.score == doctest::Approx(0.5));
    CHECK(self.label == 0);

    const auto other = classify_analytic(sol, model, sn.train2);
    CHECK(other.score == doctest::Approx(-0.5));
    CHECK(other.label == 1);

    SUBCASE("test orthogonal to the training difference ties") {
        // alpha is proportional to (1,-1), so score ~ (x1 - x2) . t
        FeatureVector diff{{sn.train1.values[0] - sn.train2.values[0],
                            sn.train1.values[1] - sn.train2.values[1]},
                           {}};
        const FeatureVector perp =
            normalize({{-diff.values[1], diff.values[0]}, {}});
        const auto res = classify_analytic(sol, model, perp);
        CHECK(std::abs(res.score) < 1e-12);
        CHECK(res.tie);
        CHECK(res.label == 0);
    }
}

TEST_CASE("analytic six-nine labels are stable across gamma") {
    const auto sn = load_six_nine();
    std::vector<int> reference;
    for (const double gamma : {1.0, 2.0, 4.0, 10.0}) {
        const auto model = make_model(sn.train1, sn.train2, {0, 1}, gamma);
        const auto sol = solve_ls_svm(model.f, {1.0, -1.0});
        std::vector<int> labels;
        for (const auto& t : sn.tests)
            labels.push_back(classify_analytic(sol, model, t).label);
        if (reference.empty())
            reference = labels;
        else
            CHECK(labels == reference);
    }
}

TEST_CASE("qsvm_circuit width and readout sign") {
    const auto sn = load_six_nine();
    const auto model = make_model(sn.train1, sn.train2, {0, 1}, 2.0);
    HhlConfig cfg;

    SUBCASE("six-nine configuration packs into 5 qubits") {
        const auto circ = qsvm_circuit(model, model.train1_circuit, cfg);
        CHECK(circ.n_qubits == 5);
    }
    SUBCASE("querying train1 scores positive, matching the analytic rule") {
        const auto res = classify_qsvm(model, sn.train1, cfg, std::nullopt, 1);
        CHECK(res.score > 0.0);
        CHECK(res.label == 0);
        const auto sol = solve_ls_svm(model.f, {1.0, -1.0});
        CHECK(res.label == classify_analytic(sol, model, sn.train1).label);
    }
    SUBCASE("register mismatch is rejected") {
        Circuit wrong{2, {}};
        CHECK_THROWS_AS(qsvm_circuit(model, wrong, cfg), ShapeError);
    }
}

TEST_CASE("zero-coupling F reduces to a trivial eigenphase") {
    // orthogonal trainings, gamma 1: F = 2I with an exact 2-bit phase
    const FeatureVector e0{{1.0, 0.0}, {}};
    const FeatureVector e1{{0.0, 1.0}, {}};
    const auto model = make_model(e0, e1, {0, 1}, 1.0);
    const auto sol = solve_ls_svm(model.f, {1.0, -1.0});
    HhlConfig cfg;
    Rng rng(401);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = ts::random_unit_vector(rng, 2);
        const auto quantum = classify_qsvm(model, t, cfg, std::nullopt, 5);
        const auto analytic = classify_analytic(sol, model, t);
        CHECK(quantum.label == analytic.label);
    }
}

TEST_CASE("classify_qsvm agrees with the analytic rule on six-nine") {
    const auto sn = load_six_nine();
    const auto model = make_model(sn.train1, sn.train2, {0, 1}, 2.0);
    const auto sol = solve_ls_svm(model.f, {1.0, -1.0});
    HhlConfig cfg;
    int correct_true = 0;
    int correct_false = 0;
    for (const auto& t : sn.tests) {
        const auto analytic = classify_analytic(sol, model, t);
        const auto quantum = classify_qsvm(model, t, cfg, std::nullopt, 11);
        CHECK(quantum.label == analytic.label);
        CHECK(quantum.success_probability > 0.0);
        if (quantum.label == *t.label) correct_true++;

        HhlConfig off = cfg;
        off.post_select = false;
        const auto degraded = classify_qsvm(model, t, off, std::nullopt, 11);
        if (degraded.label == *t.label) correct_false++;
    }
    CHECK(correct_true == 8);
    CHECK(correct_false <= correct_true);
}

TEST_CASE("inexact eigenphases make post-selection matter") {
    // gamma 1 puts the six-nine eigenvalues at 2.5 and 1.5: phases 0.625 and
    // 0.375 do not fit two clock bits, so junk reaches the unconditioned score
    const auto sn = load_six_nine();
    const auto model = make_model(sn.train1, sn.train2, {0, 1}, 1.0);
    HhlConfig on;
    HhlConfig off;
    off.post_select = false;
    double max_shift = 0.0;
    for (const auto& t : sn.tests) {
        const auto a = classify_qsvm(model, t, on, std::nullopt, 3);
        const auto b = classify_qsvm(model, t, off, std::nullopt, 3);
        CHECK(a.success_probability < 1.0);
        max_shift = std::max(max_shift, std::abs(a.score - b.score));
    }
    CHECK(max_shift > 1e-6);
}

TEST_CASE("starved post-selection is reported as an error") {
    // With C pinned to lambda_min the exact-phase reference branch empties;
    // a test vector orthogonal to (x1 - x2) then zeroes the whole readout
    // subspace.
    const auto sn = load_six_nine();
    const auto model = make_model(sn.train1, sn.train2, {0, 1}, 2.0);
    HhlConfig cfg;
    cfg.rotation_constant = model.f.lambda_min();
    const FeatureVector perp = normalize(
        {{-(sn.train1.values[1] - sn.train2.values[1]),
          sn.train1.values[0] - sn.train2.values[0]},
         {}});
    CHECK_THROWS_AS(classify_qsvm(model, perp, cfg, std::nullopt, 1),
                    StarvedPostSelectionError);
}

TEST_CASE("classify_qsvm shot mode is seed deterministic") {
    const auto sn = load_six_nine();
    const auto model = make_model(sn.train1, sn.train2, {0, 1}, 2.0);
    HhlConfig cfg;
    const auto a = classify_qsvm(model, sn.tests[0], cfg, 8192, 99);
    const auto b = classify_qsvm(model, sn.tests[0], cfg, 8192, 99);
    CHECK(a.score == b.score);
    CHECK(a.label == b.label);
    CHECK(a.success_probability == b.success_probability);
}
