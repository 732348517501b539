#include "uprop/dist.hpp"

#include "uprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace uprop {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSupportSigmas = 12.0;

double gaussian_pdf(double x, double mean, double stddev) {
    const double z = (x - mean) / stddev;
    return kInvSqrt2Pi / stddev * std::exp(-0.5 * z * z);
}

double gaussian_cdf(double x, double mean, double stddev) {
    const double z = (x - mean) / (stddev * std::numbers::sqrt2);
    return 0.5 * std::erfc(-z);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::map<std::string, std::string> parse_kv_line(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw ArgumentError("dist config: expected key=value, got '" + token + "'");
        }
        out[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("dist config: bad numeric value for '" + key + "': " + value);
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw ArgumentError("dist config: empty list for '" + key + "'");
    }
    return out;
}

} // namespace

double standard_normal_icdf(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw ArgumentError("standard_normal_icdf: u must be in (0, 1)");
    }
    // Acklam's rational approximation, then two Newton corrections against
    // the erfc-based cdf to reach full double precision.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    double x;
    if (u < plow) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double err = gaussian_cdf(x, 0.0, 1.0) - u;
        const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
        if (pdf > 0.0) {
            x -= err / pdf;
        }
    }
    return x;
}

Dist Dist::uniform(double lower, double upper) {
    if (!(lower < upper)) {
        throw ArgumentError("uniform: requires lower < upper");
    }
    return Dist(Uniform{lower, upper});
}

Dist Dist::gaussian(double mean, double stddev) {
    if (!(stddev > 0.0)) {
        throw ArgumentError("gaussian: requires stddev > 0");
    }
    return Dist(Gaussian{mean, stddev});
}

Dist Dist::gaussian_mixture(std::vector<MixtureComponent> components) {
    if (components.empty()) {
        throw ArgumentError("gaussian_mixture: requires at least one component");
    }
    double weight_sum = 0.0;
    for (const auto& comp : components) {
        if (!(comp.weight > 0.0)) {
            throw ArgumentError("gaussian_mixture: weights must be positive");
        }
        if (!(comp.stddev > 0.0)) {
            throw ArgumentError("gaussian_mixture: stddevs must be positive");
        }
        weight_sum += comp.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw ArgumentError("gaussian_mixture: weights must sum to 1 within 1e-12");
    }
    return Dist(GaussianMixture{std::move(components)});
}

Dist Dist::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("bernoulli: requires p in [0, 1]");
    }
    return Dist(Bernoulli{p});
}

double Dist::pdf(double x) const {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return (x >= v.lower && x <= v.upper) ? 1.0 / (v.upper - v.lower) : 0.0;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return gaussian_pdf(x, v.mean, v.stddev);
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                double sum = 0.0;
                for (const auto& comp : v.components) {
                    sum += comp.weight * gaussian_pdf(x, comp.mean, comp.stddev);
                }
                return sum;
            } else {
                // Probability mass at the two support points.
                if (x == 0.0) return 1.0 - v.p;
                if (x == 1.0) return v.p;
                return 0.0;
            }
        },
        value_);
}

double Dist::cdf(double x) const {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                if (x <= v.lower) return 0.0;
                if (x >= v.upper) return 1.0;
                return (x - v.lower) / (v.upper - v.lower);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return gaussian_cdf(x, v.mean, v.stddev);
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                double sum = 0.0;
                for (const auto& comp : v.components) {
                    sum += comp.weight * gaussian_cdf(x, comp.mean, comp.stddev);
                }
                return std::min(sum, 1.0);
            } else {
                if (x < 0.0) return 0.0;
                if (x < 1.0) return 1.0 - v.p;
                return 1.0;
            }
        },
        value_);
}

double Dist::icdf(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw ArgumentError("icdf: u must be in the open interval (0, 1)");
    }
    return std::visit(
        [this, u](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return v.lower + u * (v.upper - v.lower);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return v.mean + v.stddev * standard_normal_icdf(u);
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                // Bracketing bisection on the cdf with the bracket spanning
                // the component extremes, then Newton polish on the residual.
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (const auto& comp : v.components) {
                    lo = std::min(lo, comp.mean - kSupportSigmas * comp.stddev);
                    hi = std::max(hi, comp.mean + kSupportSigmas * comp.stddev);
                }
                for (int i = 0; i < 200 && hi - lo > 1e-9 * (1.0 + std::abs(lo)); ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (cdf(mid) < u ? lo : hi) = mid;
                }
                double x = 0.5 * (lo + hi);
                for (int i = 0; i < 12; ++i) {
                    const double err = cdf(x) - u;
                    if (std::abs(err) <= 1e-13) break;
                    const double density = pdf(x);
                    if (density <= 0.0) break;
                    const double step = err / density;
                    const double next = x - step;
                    if (next <= lo || next >= hi) break;
                    x = next;
                }
                return x;
            } else {
                return (u <= 1.0 - v.p) ? 0.0 : 1.0;
            }
        },
        value_);
}

double Dist::mean() const {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return 0.5 * (v.lower + v.upper);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return v.mean;
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                double sum = 0.0;
                for (const auto& comp : v.components) sum += comp.weight * comp.mean;
                return sum;
            } else {
                return v.p;
            }
        },
        value_);
}

double Dist::variance() const {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                const double w = v.upper - v.lower;
                return w * w / 12.0;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return v.stddev * v.stddev;
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                double mean = 0.0;
                for (const auto& comp : v.components) mean += comp.weight * comp.mean;
                double sum = 0.0;
                for (const auto& comp : v.components) {
                    sum += comp.weight * (comp.stddev * comp.stddev + comp.mean * comp.mean);
                }
                return sum - mean * mean;
            } else {
                return v.p * (1.0 - v.p);
            }
        },
        value_);
}

bool Dist::is_discrete() const {
    return std::holds_alternative<Bernoulli>(value_);
}

Support Dist::support() const {
    return std::visit(
        [](const auto& v) -> Support {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return Support{v.lower, v.upper};
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return Support{v.mean - kSupportSigmas * v.stddev,
                               v.mean + kSupportSigmas * v.stddev};
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (const auto& comp : v.components) {
                    lo = std::min(lo, comp.mean - kSupportSigmas * comp.stddev);
                    hi = std::max(hi, comp.mean + kSupportSigmas * comp.stddev);
                }
                return Support{lo, hi};
            } else {
                return Support{0.0, 1.0};
            }
        },
        value_);
}

std::string Dist::id() const {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            std::ostringstream out;
            if constexpr (std::is_same_v<T, Uniform>) {
                out << "uniform(" << v.lower << "," << v.upper << ")";
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                out << "gaussian(" << v.mean << "," << v.stddev << ")";
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                out << "gaussian-mixture(k=" << v.components.size() << ")";
            } else {
                out << "bernoulli(" << v.p << ")";
            }
            return out.str();
        },
        value_);
}

std::string Dist::to_config() const {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            std::string out;
            if constexpr (std::is_same_v<T, Uniform>) {
                out = "kind=uniform lower=" + fmt_double(v.lower) +
                      " upper=" + fmt_double(v.upper);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                out = "kind=gaussian mean=" + fmt_double(v.mean) +
                      " std=" + fmt_double(v.stddev);
            } else if constexpr (std::is_same_v<T, GaussianMixture>) {
                std::string weights, means, stds;
                for (std::size_t i = 0; i < v.components.size(); ++i) {
                    const char* sep = i ? "," : "";
                    weights += sep + fmt_double(v.components[i].weight);
                    means += sep + fmt_double(v.components[i].mean);
                    stds += sep + fmt_double(v.components[i].stddev);
                }
                out = "kind=gaussian-mixture weights=" + weights + " means=" + means +
                      " stds=" + stds;
            } else {
                out = "kind=bernoulli p=" + fmt_double(v.p);
            }
            return out;
        },
        value_);
}

Dist Dist::from_config(const std::string& text) {
    auto kv = parse_kv_line(text);
    const auto kind_it = kv.find("kind");
    if (kind_it == kv.end()) {
        throw ArgumentError("dist config: missing 'kind'");
    }
    const std::string& kind = kind_it->second;
    auto require = [&kv, &kind](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw ArgumentError("dist config: '" + kind + "' requires key '" + key + "'");
        }
        return it->second;
    };
    if (kind == "uniform") {
        return uniform(parse_double("lower", require("lower")),
                       parse_double("upper", require("upper")));
    }
    if (kind == "gaussian") {
        return gaussian(parse_double("mean", require("mean")),
                        parse_double("std", require("std")));
    }
    if (kind == "gaussian-mixture") {
        const auto weights = parse_double_list("weights", require("weights"));
        const auto means = parse_double_list("means", require("means"));
        const auto stds = parse_double_list("stds", require("stds"));
        if (weights.size() != means.size() || weights.size() != stds.size()) {
            throw ArgumentError("dist config: mixture lists must have equal length");
        }
        std::vector<MixtureComponent> comps;
        comps.reserve(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) {
            comps.push_back({weights[i], means[i], stds[i]});
        }
        return gaussian_mixture(std::move(comps));
    }
    if (kind == "bernoulli") {
        return bernoulli(parse_double("p", require("p")));
    }
    throw ArgumentError("dist config: unknown kind '" + kind + "'");
}

double expectation(const Dist& dist, const std::function<double(double)>& g,
                   double abs_tol) {
    auto apply = [&g](double x) { return g ? g(x) : x; };
    if (dist.is_discrete()) {
        const double p = dist.pdf(1.0);
        return (1.0 - p) * apply(0.0) + p * apply(1.0);
    }
    const Support support = dist.support();
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    return integrate([&dist, &apply](double x) { return apply(x) * dist.pdf(x); },
                     support.lower, support.upper, opts)
        .value;
}

double expectation(const Dist& dist, const Transform& g, double abs_tol) {
    return expectation(dist, [&g](double x) { return g(x); }, abs_tol);
}

AnalyticDensity::AnalyticDensity(std::function<double(double)> density, Support support,
                                 std::function<double(double)> quantile)
    : density_(std::move(density)), support_(support), quantile_(std::move(quantile)) {}

double AnalyticDensity::operator()(double y) const {
    if (!(y > support_.lower && y < support_.upper)) {
        return 0.0;
    }
    return density_(y);
}

double AnalyticDensity::quantile(double u) const {
    if (!quantile_) {
        throw ArgumentError("analytic density has no quantile function");
    }
    if (!(u > 0.0 && u < 1.0)) {
        throw ArgumentError("quantile: u must be in (0, 1)");
    }
    return quantile_(u);
}

namespace {

// Image of a possibly unbounded support endpoint. Saturating transforms
// (e.g. the sigmoid) give their exact limit through IEEE semantics.
double image_of_endpoint(const Transform& t, double endpoint) {
    constexpr double huge = 1e308;
    const double clamped = std::clamp(endpoint, -huge, huge);
    return t(clamped);
}

} // namespace

AnalyticDensity pushforward_density(const Dist& dist, const Transform& t) {
    if (!t.has_inverse() || !t.has_derivative()) {
        throw ArgumentError("pushforward_density: transform '" + t.name() +
                            "' must provide inverse and derivative");
    }
    if (t.monotonicity() == Monotonicity::NonMonotone) {
        throw ArgumentError("pushforward_density: transform '" + t.name() +
                            "' must be monotone on the support");
    }
    if (dist.is_discrete()) {
        throw ArgumentError("pushforward_density: requires a continuous input");
    }

    const bool increasing = t.monotonicity() == Monotonicity::Increasing;
    const Support in = dist.support();
    // True mathematical support: unbounded endpoints (the 12-sigma clip marks
    // Gaussian variants) are mapped through the transform's saturation limit.
    const bool unbounded = dist.as_gaussian() != nullptr || dist.as_mixture() != nullptr;
    const double lo_in = unbounded ? -std::numeric_limits<double>::infinity() : in.lower;
    const double hi_in = unbounded ? std::numeric_limits<double>::infinity() : in.upper;
    double lo_out = image_of_endpoint(t, increasing ? lo_in : hi_in);
    double hi_out = image_of_endpoint(t, increasing ? hi_in : lo_in);
    if (!(lo_out < hi_out)) {
        std::swap(lo_out, hi_out);
    }

    auto density = [dist, t](double y) {
        const double x = t.inverse(y);
        const double slope = t.derivative(x);
        if (slope == 0.0) {
            throw NumericError("pushforward_density: zero derivative at y=" +
                               std::to_string(y));
        }
        return dist.pdf(x) / std::abs(slope);
    };
    auto quantile = [dist, t, increasing](double u) {
        return t(dist.icdf(increasing ? u : 1.0 - u));
    };
    return AnalyticDensity(std::move(density), Support{lo_out, hi_out}, std::move(quantile));
}

} // namespace uprop
