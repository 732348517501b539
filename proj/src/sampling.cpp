#include "uprop/sampling.hpp"

#include "uprop/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace uprop::mc {

namespace {

Provenance make_provenance(const Rng& rng, std::string source) {
    return Provenance{rng.algorithm(), rng.seed(), std::move(source)};
}

// One Box-Muller pair from two uniforms; u1 is shifted into (0, 1] so the
// logarithm is always finite.
inline void box_muller_pair(Rng& rng, double& z0, double& z1) {
    const double u1 = 1.0 - rng.next_double();
    const double u2 = rng.next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
}

void fill_gaussian(Rng& rng, double mean, double stddev, std::size_t n,
                   std::vector<double>& out) {
    out.reserve(out.size() + n);
    double z0 = 0.0;
    double z1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 2 == 0) {
            box_muller_pair(rng, z0, z1);
            out.push_back(mean + stddev * z0);
        } else {
            out.push_back(mean + stddev * z1);
        }
    }
}

void check_finite(const std::vector<double>& values, const std::string& what) {
    std::size_t bad = 0;
    for (double v : values) {
        if (!std::isfinite(v)) ++bad;
    }
    if (bad > 0) {
        std::ostringstream msg;
        msg << what << ": " << bad << " non-finite output(s) out of " << values.size();
        throw NumericError(msg.str());
    }
}

} // namespace

SampleSet sample_uniform(Rng& rng, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("sample_uniform: n must be >= 1");
    }
    SampleSet samples;
    samples.provenance = make_provenance(rng, "uniform(0,1)");
    samples.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples.values.push_back(rng.next_double());
    }
    return samples;
}

SampleSet sample_gaussian(Rng& rng, double mean, double stddev, std::size_t n) {
    if (!(stddev > 0.0)) {
        throw ArgumentError("sample_gaussian: stddev must be > 0");
    }
    if (n < 1) {
        throw ArgumentError("sample_gaussian: n must be >= 1");
    }
    SampleSet samples;
    {
        std::ostringstream src;
        src << "gaussian(" << mean << "," << stddev << ")";
        samples.provenance = make_provenance(rng, src.str());
    }
    fill_gaussian(rng, mean, stddev, n, samples.values);
    return samples;
}

SampleSet sample_icdf(Rng& rng, const Dist& dist, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("sample_icdf: n must be >= 1");
    }
    SampleSet samples;
    samples.provenance = make_provenance(rng, dist.id());
    samples.values.reserve(n);
    if (const Bernoulli* bern = dist.as_bernoulli()) {
        // Threshold form of the Bernoulli quantile.
        for (std::size_t i = 0; i < n; ++i) {
            samples.values.push_back(rng.next_double() < bern->p ? 1.0 : 0.0);
        }
        return samples;
    }
    if (const Uniform* uni = dist.as_uniform()) {
        // Closed-form quantile; for Uniform(0,1) this reproduces the raw
        // uniform stream exactly.
        const double lower = uni->lower;
        const double width = uni->upper - uni->lower;
        for (std::size_t i = 0; i < n; ++i) {
            samples.values.push_back(lower + rng.next_double() * width);
        }
        return samples;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.next_double();
        if (u == 0.0) {
            u = std::numeric_limits<double>::min();
        }
        samples.values.push_back(dist.icdf(u));
    }
    return samples;
}

SampleSet sample_direct(Rng& rng, const Dist& dist, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("sample_direct: n must be >= 1");
    }
    if (const Gaussian* g = dist.as_gaussian()) {
        SampleSet samples = sample_gaussian(rng, g->mean, g->stddev, n);
        samples.provenance.source = dist.id();
        return samples;
    }
    if (const GaussianMixture* mix = dist.as_mixture()) {
        SampleSet samples;
        samples.provenance = make_provenance(rng, dist.id());
        samples.values.reserve(n);
        double z0 = 0.0;
        double z1 = 0.0;
        bool spare = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double pick = rng.next_double();
            double acc = 0.0;
            const MixtureComponent* chosen = &mix->components.back();
            for (const auto& comp : mix->components) {
                acc += comp.weight;
                if (pick < acc) {
                    chosen = &comp;
                    break;
                }
            }
            double z;
            if (spare) {
                z = z1;
                spare = false;
            } else {
                box_muller_pair(rng, z0, z1);
                z = z0;
                spare = true;
            }
            samples.values.push_back(chosen->mean + chosen->stddev * z);
        }
        return samples;
    }
    return sample_icdf(rng, dist, n);
}

SampleSet evaluate(const SampleSet& samples, const Transform& t) {
    SampleSet out;
    out.provenance = samples.provenance;
    out.provenance.source = t.name() + "(" + samples.provenance.source + ")";
    out.values.reserve(samples.size());
    for (double x : samples.values) {
        out.values.push_back(t(x));
    }
    check_finite(out.values, "evaluate[" + t.name() + "]");
    return out;
}

SampleSet evaluate_multi(const std::vector<std::pair<std::string, const SampleSet*>>& inputs,
                         const Expr& expr) {
    if (inputs.empty()) {
        throw ArgumentError("evaluate_multi: no inputs bound");
    }
    const std::size_t n = inputs.front().second->size();
    std::vector<std::string> names;
    names.reserve(inputs.size());
    for (const auto& [name, set] : inputs) {
        if (set->size() != n) {
            throw ArgumentError("evaluate_multi: input '" + name +
                                "' length mismatch");
        }
        names.push_back(name);
    }
    const CompiledExpr compiled(expr, names);

    SampleSet out;
    out.provenance = inputs.front().second->provenance;
    out.provenance.source = "expr";
    out.values.resize(n);
    std::vector<double> row(inputs.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            row[k] = inputs[k].second->values[i];
        }
        out.values[i] = compiled.eval(row);
    }
    check_finite(out.values, "evaluate_multi");
    return out;
}

bool buffon_crossing(double center_offset, double angle) {
    return center_offset <= 0.5 * std::sin(angle);
}

double buffon_estimate(Rng& rng, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("buffon_estimate: n must be >= 1");
    }
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = 0.5 * rng.next_double();
        const double angle = 0.5 * std::numbers::pi * rng.next_double();
        if (buffon_crossing(offset, angle)) {
            ++crossings;
        }
    }
    return static_cast<double>(crossings) / static_cast<double>(n);
}

} // namespace uprop::mc
