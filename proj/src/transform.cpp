#include "uprop/transform.hpp"

#include "uprop/errors.hpp"

#include <cmath>
#include <numbers>

namespace uprop {

double Transform::inverse(double y) const {
    if (!inverse_) {
        throw ArgumentError("transform '" + name_ + "' has no inverse");
    }
    return inverse_(y);
}

double Transform::derivative(double x) const {
    if (!derivative_) {
        throw ArgumentError("transform '" + name_ + "' has no derivative");
    }
    return derivative_(x);
}

namespace transforms {

Transform identity() {
    return Transform(
        "identity",
        [](double x) { return x; },
        [](double y) { return y; },
        [](double) { return 1.0; },
        Monotonicity::Increasing);
}

Transform affine(double scale, double shift) {
    Transform::Fn inverse;
    if (scale != 0.0) {
        inverse = [scale, shift](double y) { return (y - shift) / scale; };
    }
    Monotonicity mono = scale > 0.0   ? Monotonicity::Increasing
                        : scale < 0.0 ? Monotonicity::Decreasing
                                      : Monotonicity::NonMonotone;
    return Transform(
        "affine",
        [scale, shift](double x) { return scale * x + shift; },
        std::move(inverse),
        [scale](double) { return scale; },
        mono);
}

Transform sigmoid_shifted() {
    return Transform(
        "sigmoid",
        [](double x) { return 1.0 / (1.0 + std::exp(-(x - 1.0))); },
        [](double y) { return 1.0 + std::log(y / (1.0 - y)); },
        [](double x) {
            const double e = std::exp(-(x - 1.0));
            const double d = 1.0 + e;
            return e / (d * d);
        },
        Monotonicity::Increasing);
}

Transform exponential() {
    return Transform(
        "exp",
        [](double x) { return std::exp(x); },
        [](double y) { return std::log(y); },
        [](double x) { return std::exp(x); },
        Monotonicity::Increasing);
}

Transform power_int(int k) {
    if (k < 1) {
        throw ArgumentError("power_int: exponent must be >= 1");
    }
    auto forward = [k](double x) {
        double acc = x;
        for (int i = 1; i < k; ++i) {
            acc *= x;
        }
        return acc;
    };
    // Odd powers are global bijections; even powers are monotone only on a
    // sign-definite support, so no global inverse is exposed.
    Transform::Fn inverse;
    Monotonicity mono = Monotonicity::NonMonotone;
    if (k % 2 == 1) {
        inverse = [k](double y) {
            return std::copysign(std::pow(std::abs(y), 1.0 / k), y);
        };
        mono = Monotonicity::Increasing;
    }
    return Transform(
        "pow" + std::to_string(k),
        forward,
        std::move(inverse),
        [k](double x) {
            double acc = static_cast<double>(k);
            for (int i = 1; i < k; ++i) {
                acc *= x;
            }
            return acc;
        },
        mono);
}

Transform reciprocal() {
    return Transform(
        "reciprocal",
        [](double x) { return 1.0 / x; },
        [](double y) { return 1.0 / y; },
        [](double x) { return -1.0 / (x * x); },
        Monotonicity::Decreasing);
}

Transform square() {
    return Transform(
        "square",
        [](double x) { return x * x; },
        nullptr,
        [](double x) { return 2.0 * x; },
        Monotonicity::NonMonotone);
}

} // namespace transforms

Transform sigmoid_transform() {
    return transforms::sigmoid_shifted();
}

PoiseuilleTransforms poiseuille_report_transforms() {
    return PoiseuilleTransforms{
        transforms::power_int(4),
        transforms::affine(std::numbers::pi / 8.0, 0.0),
        transforms::reciprocal(),
    };
}

} // namespace uprop
