#include "uprop/quadrature.hpp"

#include "uprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace uprop {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (nonnegative abscissae).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

// Gauss-7 weights matching Kronrod nodes 1, 3, 5, 7 (odd indices).
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Interval {
    double lower;
    double upper;
    double value;
    double error;
    bool operator<(const Interval& other) const { return error < other.error; }
};

Interval evaluate_gk15(const std::function<double(double)>& f, double lower, double upper) {
    const double center = 0.5 * (lower + upper);
    const double half = 0.5 * (upper - lower);

    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double offset = half * kKronrodNodes[i];
        double fsum;
        if (i == 7) {
            fsum = f(center);
        } else {
            fsum = f(center - offset) + f(center + offset);
        }
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) {
            gauss += kGaussWeights[i / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;

    Interval out;
    out.lower = lower;
    out.upper = upper;
    out.value = kronrod;
    out.error = std::abs(kronrod - gauss);
    return out;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           double lower, double upper,
                           const QuadratureOptions& opts) {
    if (!(lower < upper)) {
        throw ArgumentError("integrate: lower bound must be below upper bound");
    }

    std::priority_queue<Interval> queue;
    queue.push(evaluate_gk15(f, lower, upper));

    double total_value = queue.top().value;
    double total_error = queue.top().error;
    std::size_t subdivisions = 0;

    while (total_error > opts.abs_tol) {
        if (subdivisions >= opts.max_subdivisions) {
            std::ostringstream msg;
            msg << "integrate: no convergence after " << subdivisions
                << " subdivisions, residual error estimate " << total_error;
            throw NumericError(msg.str());
        }
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lower + worst.upper);
        if (mid <= worst.lower || mid >= worst.upper) {
            // Interval at floating-point resolution; nothing further to split.
            queue.push(worst);
            break;
        }
        Interval left = evaluate_gk15(f, worst.lower, mid);
        Interval right = evaluate_gk15(f, mid, worst.upper);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
    }

    // Re-accumulate from the queue for a tighter rounding profile.
    std::vector<Interval> parts;
    parts.reserve(queue.size());
    while (!queue.empty()) {
        parts.push_back(queue.top());
        queue.pop();
    }
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lower < b.lower; });
    double value = 0.0;
    double comp = 0.0;
    double error = 0.0;
    for (const Interval& part : parts) {
        const double y = part.value - comp;
        const double t = value + y;
        comp = (t - value) - y;
        value = t;
        error += part.error;
    }

    QuadratureResult result;
    result.value = value;
    result.error_estimate = error;
    result.subdivisions = subdivisions;
    return result;
}

} // namespace uprop
