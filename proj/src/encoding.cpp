#include "qsvm/encoding.hpp"

#include <cmath>
#include <string>

#include "qsvm/errors.hpp"

namespace qsvm {

namespace {
constexpr double kUnitNormTol = 1e-9;

void require_unit(const FeatureVector& v, const char* where) {
    if (std::abs(l2_norm(v) - 1.0) > kUnitNormTol)
        throw PreconditionError(std::string(where) +
                                ": input must be normalized (callers "
                                "normalize explicitly)");
}
} // namespace

double l2_norm(const FeatureVector& v) {
    double s = 0.0;
    for (double x : v.values) s += x * x;
    return std::sqrt(s);
}

FeatureVector normalize(const FeatureVector& v) {
    for (double x : v.values)
        if (!std::isfinite(x))
            throw PreconditionError("normalize: non-finite feature value");
    const double n = l2_norm(v);
    if (n == 0.0)
        throw DegenerateVectorError("normalize: all-zero feature vector");
    FeatureVector out = v;
    for (double& x : out.values) x /= n;
    return out;
}

double angle2(double alpha, double beta) {
    if (alpha == 0.0 && beta == 0.0)
        throw DegenerateVectorError("angle2: both components are zero");
    return 2.0 * std::atan2(beta, alpha);
}

Circuit encode2(const FeatureVector& v) {
    if (v.values.size() != 2)
        throw ShapeError("encode2: expected 2 features, got " +
                         std::to_string(v.values.size()));
    require_unit(v, "encode2");
    Circuit c;
    c.n_qubits = 1;
    c.ops.push_back(ry(angle2(v.values[0], v.values[1]), 0));
    return c;
}

Circuit encode4(const FeatureVector& v, ThirdAngleMode mode) {
    if (v.values.size() != 4)
        throw ShapeError("encode4: expected 4 features, got " +
                         std::to_string(v.values.size()));
    require_unit(v, "encode4");
    const double alpha = v.values[0];
    const double beta = v.values[1];
    const double gamma = v.values[2];
    const double delta = v.values[3];
    const double r_low = std::hypot(alpha, beta);
    const double r_high = std::hypot(gamma, delta);

    const double theta1 = 2.0 * std::atan2(r_high, r_low);
    // zero-amplitude branches get angle 0; any value would be unobservable
    const double theta2 = r_low > 0.0 ? 2.0 * std::atan2(beta, alpha) : 0.0;
    double theta3 = 0.0;
    if (r_high > 0.0)
        theta3 = mode == ThirdAngleMode::StateMatched
                     ? 2.0 * std::atan2(delta, gamma)
                     : 2.0 * std::atan2(gamma, delta);

    Circuit c;
    c.n_qubits = 2;
    c.ops.push_back(u3(theta1, 0.0, 0.0, 1));
    c.ops.push_back(with_control(u3(theta2, 0.0, 0.0, 0), 1, /*anti=*/true));
    c.ops.push_back(with_control(u3(theta3, 0.0, 0.0, 0), 1));
    return c;
}

} // namespace qsvm
