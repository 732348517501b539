#pragma once

#include "uprop/dist.hpp"
#include "uprop/expr.hpp"
#include "uprop/rng.hpp"
#include "uprop/samples.hpp"
#include "uprop/transform.hpp"

namespace uprop::mc {

/// n uniform variates in [0, 1).
SampleSet sample_uniform(Rng& rng, std::size_t n);

/// n Gaussian variates via Box-Muller pairs mapped through mean + stddev * z.
SampleSet sample_gaussian(Rng& rng, double mean, double stddev, std::size_t n);

/// Inverse transform sampling: icdf(u_i) for uniform u_i.
SampleSet sample_icdf(Rng& rng, const Dist& dist, std::size_t n);

/// Direct generator per variant: affine map for uniform, Box-Muller for
/// Gaussian, component selection + Box-Muller for mixtures, threshold for
/// Bernoulli. This is the generator the benchmark pipelines use.
SampleSet sample_direct(Rng& rng, const Dist& dist, std::size_t n);

/// Elementwise y_i = f(x_i), order preserved. Any non-finite output aborts
/// the run with a NumericError carrying the count.
SampleSet evaluate(const SampleSet& samples, const Transform& t);

/// Evaluates a multivariate expression; the i-th output consumes the i-th
/// sample of every input (independent joint draws).
SampleSet evaluate_multi(const std::vector<std::pair<std::string, const SampleSet*>>& inputs,
                         const Expr& expr);

/// Crossing predicate for a unit needle on unit-spaced lines: center offset
/// u in [0, 0.5], angle in [0, pi/2].
bool buffon_crossing(double center_offset, double angle);

/// Fraction of n simulated needle drops that cross a line; estimates 2/pi.
double buffon_estimate(Rng& rng, std::size_t n);

} // namespace uprop::mc
