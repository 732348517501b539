#pragma once

#include "uprop/dist.hpp"
#include "uprop/rng.hpp"
#include "uprop/samples.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace uprop::pprvg {

/// Entropy source feeding the Spot simulator: either a simulated Gaussian
/// process or a replay of recorded measurements (which errors at
/// exhaustion). Carries a second, independent uniform stream used for
/// programmable component selection so the noise stream itself stays
/// untouched by programming decisions.
class NoiseSource {
public:
    static NoiseSource simulated_gaussian(double mean, double stddev, std::uint64_t seed);
    static NoiseSource replay(std::vector<double> recorded, std::uint64_t seed);
    static NoiseSource replay_file(const std::string& path, std::uint64_t seed);

    /// Next physical measurement (Gaussian draw or recorded value).
    double next_noise();

    /// Next uniform selector draw in [0, 1).
    double next_selector();

    bool is_replay() const { return replay_; }
    std::uint64_t seed() const { return seed_; }

private:
    NoiseSource(double mean, double stddev, std::uint64_t seed, bool replay,
                std::vector<double> recorded);

    bool replay_;
    double mean_;
    double stddev_;
    std::uint64_t seed_;
    std::vector<double> recorded_;
    std::size_t cursor_ = 0;
    Rng noise_rng_;
    Rng selector_rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Spot program: list of (weight, scale, offset) triples. One variate is one
/// component pick, one source draw, one multiplication and one addition.
struct SpotProgram {
    struct Component {
        double weight;
        double scale;
        double offset;
    };
    std::vector<Component> components;

    static SpotProgram validated(std::vector<Component> components);

    /// Program reproducing a Gaussian mixture from a standard normal source:
    /// component (w, sigma, mu) per mixture term.
    static SpotProgram from_mixture(const GaussianMixture& mixture);

    std::string to_config() const;
    static SpotProgram from_config(const std::string& text);
};

SampleSet spot_sample(NoiseSource& source, const SpotProgram& program, std::size_t n);

/// A raw device response curve on [0, 1].
struct ResponseFn {
    std::string name;
    std::function<double(double)> fn;
};

/// Built-in surrogate transfer characteristics: a linear (ohmic) pair first,
/// then smooth saturating curves with distinct shape parameters. Up to 8.
std::vector<ResponseFn> builtin_responses(std::size_t count);

/// Tabulated response from a two-column CSV (u, g(u)); linear interpolation.
ResponseFn load_response_csv(const std::string& path);

/// Orthonormal basis from raw responses by modified Gram-Schmidt under the
/// discrete inner product (1/Q) sum f(u_k) g(u_k) on midpoints u_k.
class GalerkinBasis {
public:
    static std::shared_ptr<const GalerkinBasis> build(std::vector<ResponseFn> responses,
                                                      std::size_t k, std::size_t q = 4096);

    std::size_t size() const { return coeffs_.size(); }
    std::size_t grid_size() const { return grid_.size(); }
    const std::vector<double>& grid() const { return grid_; }

    double eval_basis(std::size_t i, double u) const;
    double basis_value(std::size_t i, std::size_t grid_index) const {
        return values_[i][grid_index];
    }

    /// e_i = sum_j coeffs[i][j] * g_j over the raw responses.
    const std::vector<std::vector<double>>& coeffs() const { return coeffs_; }
    const std::vector<ResponseFn>& responses() const { return responses_; }

    /// max |<e_i, e_j> - delta_ij| over all pairs on the grid.
    double orthonormality_error() const;

    double condition_estimate() const { return condition_estimate_; }

private:
    GalerkinBasis() = default;
    std::vector<ResponseFn> responses_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> values_; // orthonormal basis on the grid
    std::vector<std::vector<double>> coeffs_;
    double condition_estimate_ = 1.0;
};

/// Least-squares Galerkin fit of a target quantile function: coefficients
/// are projections onto the orthonormal basis, collapsed onto the raw
/// responses for evaluation at fixed per-sample cost.
struct IcdfApprox {
    std::shared_ptr<const GalerkinBasis> basis;
    std::vector<double> coeffs;     // over the orthonormal basis
    std::vector<double> raw_coeffs; // collapsed onto raw responses
    double residual = 0.0;          // L2 of (target - fit) on the grid
    double monotonicity_defect = 0.0; // sum of negative increments on the grid
    std::string target_id;

    double operator()(double u) const;
    bool nondecreasing_on_grid() const { return monotonicity_defect == 0.0; }
};

IcdfApprox fit_icdf(std::shared_ptr<const GalerkinBasis> basis,
                    const std::function<double(double)>& target_quantile,
                    std::string target_id);
IcdfApprox fit_icdf(std::shared_ptr<const GalerkinBasis> basis, const Dist& target);

/// Inverse transform sampling through the fitted approximation. Per-sample
/// cost is K response evaluations regardless of the target distribution.
SampleSet grappa_sample(const IcdfApprox& approx, Rng& rng, std::size_t n);

/// Quantile helpers for fit targets that are monotone images of the core
/// descriptors (e.g. lognormal = exp of a Gaussian quantile).
std::function<double(double)> quantile_of(const Dist& dist);
std::function<double(double)> lognormal_quantile(double log_mean = 0.0,
                                                 double log_stddev = 1.0);
std::function<double(double)> exponential_quantile(double rate = 1.0);

} // namespace uprop::pprvg
