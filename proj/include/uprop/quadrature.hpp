#pragma once

#include <cstddef>
#include <functional>

namespace uprop {

struct QuadratureOptions {
    double abs_tol = 1e-9;
    std::size_t max_subdivisions = 10000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t subdivisions = 0;
};

/// Adaptive Gauss-Kronrod (7-15) integration of f over [lower, upper].
/// Intervals are bisected worst-error-first until the summed error estimate
/// drops below abs_tol. Throws NumericError with the residual estimate if the
/// subdivision budget is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double lower, double upper,
                           const QuadratureOptions& opts = {});

} // namespace uprop
