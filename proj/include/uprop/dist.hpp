#pragma once

#include "uprop/quadrature.hpp"
#include "uprop/transform.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace uprop {

struct Uniform {
    double lower;
    double upper;
};

struct Gaussian {
    double mean;
    double stddev;
};

struct MixtureComponent {
    double weight;
    double mean;
    double stddev;
};

struct GaussianMixture {
    std::vector<MixtureComponent> components;
};

struct Bernoulli {
    double p;
};

/// Interval the numerical routines integrate over. For unbounded densities
/// this is a clip wide enough that the excluded tail mass is far below every
/// tolerance used in the project (12 standard deviations).
struct Support {
    double lower;
    double upper;
};

/// Closed-form univariate distribution descriptor with pdf, cdf and inverse
/// cdf. Immutable after construction; all members are pure.
class Dist {
public:
    static Dist uniform(double lower, double upper);
    static Dist gaussian(double mean, double stddev);
    static Dist gaussian_mixture(std::vector<MixtureComponent> components);
    static Dist bernoulli(double p);

    double pdf(double x) const;
    double cdf(double x) const;

    /// Quantile function; requires u in (0, 1). Closed form for uniform and
    /// Gaussian, bracketed bisection with Newton polish for mixtures.
    double icdf(double u) const;

    double mean() const;
    double variance() const;

    bool is_discrete() const;

    /// Quadrature window: exact bounds for uniform, a 12-sigma clip for
    /// Gaussian and mixtures. Meaningless for Bernoulli.
    Support support() const;

    /// Compact identifier such as "gaussian(0,1)" used in sample provenance.
    std::string id() const;

    /// Key-value config line, e.g. "kind=uniform lower=0 upper=1".
    std::string to_config() const;
    static Dist from_config(const std::string& text);

    const GaussianMixture* as_mixture() const { return std::get_if<GaussianMixture>(&value_); }
    const Gaussian* as_gaussian() const { return std::get_if<Gaussian>(&value_); }
    const Uniform* as_uniform() const { return std::get_if<Uniform>(&value_); }
    const Bernoulli* as_bernoulli() const { return std::get_if<Bernoulli>(&value_); }

private:
    using Value = std::variant<Uniform, Gaussian, GaussianMixture, Bernoulli>;
    explicit Dist(Value value) : value_(std::move(value)) {}
    Value value_;
};

/// E[g(X)] by adaptive quadrature of g(x) p(x) over the support (weighted sum
/// for discrete variants). Identity when g is omitted.
double expectation(const Dist& dist, const std::function<double(double)>& g = nullptr,
                   double abs_tol = 1e-9);
double expectation(const Dist& dist, const Transform& g, double abs_tol = 1e-9);

/// Evaluable output density with its support; produced by change of
/// variables. Density evaluates to 0 at and outside the support endpoints.
class AnalyticDensity {
public:
    AnalyticDensity(std::function<double(double)> density, Support support,
                    std::function<double(double)> quantile = nullptr);

    double operator()(double y) const;
    Support support() const { return support_; }

    bool has_quantile() const { return static_cast<bool>(quantile_); }
    double quantile(double u) const;

private:
    std::function<double(double)> density_;
    Support support_;
    std::function<double(double)> quantile_;
};

/// Change of variables: the density of Y = f(X) for an invertible,
/// differentiable, monotone f, i.e. y -> p(f^-1(y)) / |f'(f^-1(y))|.
/// The result carries the exact quantile function f o icdf (monotone maps
/// commute with quantiles), so it can be sampled without root finding.
AnalyticDensity pushforward_density(const Dist& dist, const Transform& t);

/// Standard normal quantile (inverse Phi), |error| < 1e-15 after refinement.
double standard_normal_icdf(double u);

} // namespace uprop
