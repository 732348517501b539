#pragma once

#include <functional>
#include <string>

namespace uprop {

enum class Monotonicity { Increasing, Decreasing, NonMonotone };

/// A univariate map with optional analytic inverse and derivative.
/// Immutable after construction; safe to share across threads.
class Transform {
public:
    using Fn = std::function<double(double)>;

    Transform(std::string name, Fn forward, Fn inverse, Fn derivative,
              Monotonicity monotonicity)
        : name_(std::move(name)), forward_(std::move(forward)),
          inverse_(std::move(inverse)), derivative_(std::move(derivative)),
          monotonicity_(monotonicity) {}

    double operator()(double x) const { return forward_(x); }

    bool has_inverse() const { return static_cast<bool>(inverse_); }
    bool has_derivative() const { return static_cast<bool>(derivative_); }

    double inverse(double y) const;
    double derivative(double x) const;

    const std::string& name() const { return name_; }
    Monotonicity monotonicity() const { return monotonicity_; }

private:
    std::string name_;
    Fn forward_;
    Fn inverse_;
    Fn derivative_;
    Monotonicity monotonicity_;
};

namespace transforms {

Transform identity();

/// scale * x + shift; invertible when scale != 0.
Transform affine(double scale, double shift);

/// The shifted logistic map x -> 1 / (1 + exp(-(x - 1))), a bijection from
/// the reals onto (0, 1). Inverse is 1 + log(y / (1 - y)).
Transform sigmoid_shifted();

Transform exponential();

/// x -> x^k by repeated multiplication; k >= 1. Monotone for odd k or when
/// restricted to nonnegative support.
Transform power_int(int k);

/// x -> 1/x on a sign-definite support.
Transform reciprocal();

Transform square();

} // namespace transforms

/// The challenge evaluation map (the shifted sigmoid).
Transform sigmoid_transform();

/// Unary pieces of the pipe-flow expression, useful for the marginal
/// pushforward plots: { r -> r^4, x -> (pi/8) x, x -> 1/x }.
struct PoiseuilleTransforms {
    Transform radius_quartic;
    Transform scale_pi_over_8;
    Transform reciprocal;
};
PoiseuilleTransforms poiseuille_report_transforms();

} // namespace uprop
