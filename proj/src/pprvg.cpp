#include "uprop/pprvg.hpp"

#include "uprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace uprop::pprvg {

namespace {

constexpr std::uint64_t kSelectorSeedSalt = 0x5E1EC70F5EEDULL;

}

NoiseSource::NoiseSource(double mean, double stddev, std::uint64_t seed, bool replay,
                         std::vector<double> recorded)
    : replay_(replay), mean_(mean), stddev_(stddev), seed_(seed),
      recorded_(std::move(recorded)), noise_rng_(seed),
      selector_rng_(derive_seed(seed, kSelectorSeedSalt, 1)) {}

NoiseSource NoiseSource::simulated_gaussian(double mean, double stddev,
                                            std::uint64_t seed) {
    if (!(stddev > 0.0)) {
        throw ArgumentError("noise source: stddev must be > 0");
    }
    return NoiseSource(mean, stddev, seed, false, {});
}

NoiseSource NoiseSource::replay(std::vector<double> recorded, std::uint64_t seed) {
    if (recorded.empty()) {
        throw ArgumentError("noise source: replay buffer must be non-empty");
    }
    return NoiseSource(0.0, 1.0, seed, true, std::move(recorded));
}

NoiseSource NoiseSource::replay_file(const std::string& path, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("noise source: cannot open " + path);
    }
    std::vector<double> recorded;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        try {
            recorded.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw IoError("noise source: bad numeric line in " + path + ": " + line);
        }
    }
    return replay(std::move(recorded), seed);
}

double NoiseSource::next_noise() {
    if (replay_) {
        if (cursor_ >= recorded_.size()) {
            throw NumericError("noise source depleted after " +
                               std::to_string(recorded_.size()) + " recorded values");
        }
        return recorded_[cursor_++];
    }
    if (has_spare_) {
        has_spare_ = false;
        return mean_ + stddev_ * spare_;
    }
    const double u1 = 1.0 - noise_rng_.next_double();
    const double u2 = noise_rng_.next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean_ + stddev_ * (radius * std::cos(angle));
}

double NoiseSource::next_selector() {
    return selector_rng_.next_double();
}

SpotProgram SpotProgram::validated(std::vector<Component> components) {
    if (components.empty()) {
        throw ArgumentError("spot program: needs at least one component");
    }
    double weight_sum = 0.0;
    for (const Component& comp : components) {
        if (!(comp.weight > 0.0)) {
            throw ArgumentError("spot program: weights must be positive");
        }
        weight_sum += comp.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw ArgumentError("spot program: weights must sum to 1 within 1e-12");
    }
    SpotProgram program;
    program.components = std::move(components);
    return program;
}

SpotProgram SpotProgram::from_mixture(const GaussianMixture& mixture) {
    std::vector<Component> components;
    components.reserve(mixture.components.size());
    for (const MixtureComponent& comp : mixture.components) {
        components.push_back({comp.weight, comp.stddev, comp.mean});
    }
    return validated(std::move(components));
}

std::string SpotProgram::to_config() const {
    std::ostringstream out;
    char buf[128];
    for (std::size_t i = 0; i < components.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%scomponent=%.17g,%.17g,%.17g",
                      i ? " " : "", components[i].weight, components[i].scale,
                      components[i].offset);
        out << buf;
    }
    return out.str();
}

SpotProgram SpotProgram::from_config(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    std::vector<Component> components;
    while (in >> token) {
        if (token.rfind("component=", 0) != 0) {
            throw ArgumentError("spot program config: expected component=w,a,b, got '" +
                                token + "'");
        }
        std::istringstream triad(token.substr(10));
        std::string field;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(triad, field, ',')) {
                throw ArgumentError("spot program config: component needs 3 values");
            }
            try {
                vals[k] = std::stod(field);
            } catch (const std::exception&) {
                throw ArgumentError("spot program config: bad number '" + field + "'");
            }
        }
        components.push_back({vals[0], vals[1], vals[2]});
    }
    return validated(std::move(components));
}

SampleSet spot_sample(NoiseSource& source, const SpotProgram& program, std::size_t n) {
    if (program.components.empty()) {
        throw ArgumentError("spot_sample: empty program");
    }
    SampleSet samples;
    samples.provenance =
        Provenance{"spot", source.seed(),
                   "spot(k=" + std::to_string(program.components.size()) + ")"};
    samples.values.reserve(n);
    const bool single = program.components.size() == 1;
    for (std::size_t i = 0; i < n; ++i) {
        const SpotProgram::Component* chosen = &program.components.front();
        if (!single) {
            const double pick = source.next_selector();
            double acc = 0.0;
            for (const auto& comp : program.components) {
                acc += comp.weight;
                if (pick < acc) {
                    chosen = &comp;
                    break;
                }
                chosen = &comp;
            }
        }
        const double z = source.next_noise();
        samples.values.push_back(chosen->scale * z + chosen->offset);
    }
    return samples;
}

std::vector<ResponseFn> builtin_responses(std::size_t count) {
    if (count < 1 || count > 8) {
        throw ArgumentError("builtin_responses: count must be in [1, 8]");
    }
    // The first pair spans the device's linear operating regime; the rest
    // are saturating curves with distinct steepness and bias points.
    static const std::vector<ResponseFn> family = {
        {"bias", [](double) { return 1.0; }},
        {"ramp", [](double u) { return u; }},
        {"tanh2", [](double u) { return std::tanh(2.0 * (u - 0.5)); }},
        {"sig6lo", [](double u) { return 1.0 / (1.0 + std::exp(-6.0 * (u - 0.35))); }},
        {"sig6hi", [](double u) { return 1.0 / (1.0 + std::exp(-6.0 * (u - 0.65))); }},
        {"tanh4lo", [](double u) { return std::tanh(4.0 * (u - 0.25)); }},
        {"tanh4hi", [](double u) { return std::tanh(4.0 * (u - 0.75)); }},
        {"sat", [](double u) { return u / (u + 0.2); }},
    };
    return {family.begin(), family.begin() + static_cast<std::ptrdiff_t>(count)};
}

ResponseFn load_response_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("load_response_csv: cannot open " + path);
    }
    std::vector<std::pair<double, double>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError("load_response_csv: bad row: " + line);
        }
        try {
            table.emplace_back(std::stod(line.substr(0, comma)),
                               std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            if (table.empty()) {
                continue; // header row
            }
            throw IoError("load_response_csv: bad numeric row: " + line);
        }
    }
    if (table.size() < 2) {
        throw IoError("load_response_csv: need at least two rows in " + path);
    }
    std::sort(table.begin(), table.end());
    return ResponseFn{
        "table:" + path,
        [table](double u) {
            if (u <= table.front().first) return table.front().second;
            if (u >= table.back().first) return table.back().second;
            auto hi = std::lower_bound(table.begin(), table.end(),
                                       std::make_pair(u, -1e308));
            auto lo = hi - 1;
            const double t = (u - lo->first) / (hi->first - lo->first);
            return lo->second + t * (hi->second - lo->second);
        }};
}

std::shared_ptr<const GalerkinBasis> GalerkinBasis::build(std::vector<ResponseFn> responses,
                                                          std::size_t k, std::size_t q) {
    if (k < 1) {
        throw ArgumentError("galerkin basis: K must be >= 1");
    }
    if (k > responses.size()) {
        throw ArgumentError("galerkin basis: K exceeds the number of responses");
    }
    if (q < k) {
        throw ArgumentError("galerkin basis: grid size must be >= K");
    }

    auto basis = std::shared_ptr<GalerkinBasis>(new GalerkinBasis());
    basis->responses_ = std::move(responses);
    basis->responses_.resize(k);
    basis->grid_.resize(q);
    for (std::size_t g = 0; g < q; ++g) {
        basis->grid_[g] = (static_cast<double>(g) + 0.5) / static_cast<double>(q);
    }

    const double inv_q = 1.0 / static_cast<double>(q);
    auto dot = [inv_q](const std::vector<double>& a, const std::vector<double>& b) {
        double sum = 0.0;
        for (std::size_t g = 0; g < a.size(); ++g) {
            sum += a[g] * b[g];
        }
        return sum * inv_q;
    };

    basis->values_.assign(k, std::vector<double>(q));
    basis->coeffs_.assign(k, std::vector<double>(k, 0.0));
    double max_initial_norm = 0.0;
    double min_residual_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        auto& row = basis->values_[i];
        for (std::size_t g = 0; g < q; ++g) {
            row[g] = basis->responses_[i].fn(basis->grid_[g]);
            if (!std::isfinite(row[g])) {
                throw NumericError("galerkin basis: response '" +
                                   basis->responses_[i].name +
                                   "' is non-finite on the grid");
            }
        }
        basis->coeffs_[i][i] = 1.0;
        max_initial_norm = std::max(max_initial_norm, std::sqrt(dot(row, row)));

        // Modified Gram-Schmidt with the same row operations mirrored on the
        // coefficient matrix, so e_i stays expressed over raw responses.
        for (std::size_t p = 0; p < i; ++p) {
            const double proj = dot(row, basis->values_[p]);
            for (std::size_t g = 0; g < q; ++g) {
                row[g] -= proj * basis->values_[p][g];
            }
            for (std::size_t c = 0; c <= p; ++c) {
                basis->coeffs_[i][c] -= proj * basis->coeffs_[p][c];
            }
        }
        const double norm = std::sqrt(dot(row, row));
        if (norm < 1e-10) {
            throw ArgumentError("galerkin basis: response " + std::to_string(i) + " ('" +
                                basis->responses_[i].name +
                                "') is linearly dependent on the grid");
        }
        min_residual_norm = std::min(min_residual_norm, norm);
        const double inv_norm = 1.0 / norm;
        for (std::size_t g = 0; g < q; ++g) {
            row[g] *= inv_norm;
        }
        for (std::size_t c = 0; c <= i; ++c) {
            basis->coeffs_[i][c] *= inv_norm;
        }
    }
    basis->condition_estimate_ =
        max_initial_norm / std::max(min_residual_norm, 1e-300);
    return basis;
}

double GalerkinBasis::eval_basis(std::size_t i, double u) const {
    double sum = 0.0;
    for (std::size_t j = 0; j <= i; ++j) {
        if (coeffs_[i][j] != 0.0) {
            sum += coeffs_[i][j] * responses_[j].fn(u);
        }
    }
    return sum;
}

double GalerkinBasis::orthonormality_error() const {
    const double inv_q = 1.0 / static_cast<double>(grid_.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        for (std::size_t j = i; j < values_.size(); ++j) {
            double sum = 0.0;
            for (std::size_t g = 0; g < grid_.size(); ++g) {
                sum += values_[i][g] * values_[j][g];
            }
            sum *= inv_q;
            worst = std::max(worst, std::abs(sum - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

IcdfApprox fit_icdf(std::shared_ptr<const GalerkinBasis> basis,
                    const std::function<double(double)>& target_quantile,
                    std::string target_id) {
    if (!basis) {
        throw ArgumentError("fit_icdf: null basis");
    }
    const std::size_t q = basis->grid_size();
    const std::size_t k = basis->size();
    const double inv_q = 1.0 / static_cast<double>(q);

    std::vector<double> target(q);
    for (std::size_t g = 0; g < q; ++g) {
        target[g] = target_quantile(basis->grid()[g]);
        if (!std::isfinite(target[g])) {
            throw NumericError("fit_icdf: target quantile non-finite at u=" +
                               std::to_string(basis->grid()[g]));
        }
    }

    IcdfApprox approx;
    approx.basis = basis;
    approx.target_id = std::move(target_id);
    approx.coeffs.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::size_t g = 0; g < q; ++g) {
            sum += target[g] * basis->basis_value(i, g);
        }
        approx.coeffs[i] = sum * inv_q;
    }
    approx.raw_coeffs.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            approx.raw_coeffs[j] += approx.coeffs[i] * basis->coeffs()[i][j];
        }
    }

    double sq_err = 0.0;
    double prev_fit = 0.0;
    double defect = 0.0;
    for (std::size_t g = 0; g < q; ++g) {
        double fit = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            fit += approx.coeffs[i] * basis->basis_value(i, g);
        }
        const double err = target[g] - fit;
        sq_err += err * err;
        if (g > 0 && fit < prev_fit) {
            defect += prev_fit - fit;
        }
        prev_fit = fit;
    }
    approx.residual = std::sqrt(sq_err * inv_q);
    approx.monotonicity_defect = defect;
    return approx;
}

IcdfApprox fit_icdf(std::shared_ptr<const GalerkinBasis> basis, const Dist& target) {
    return fit_icdf(std::move(basis), quantile_of(target), target.id());
}

double IcdfApprox::operator()(double u) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < raw_coeffs.size(); ++j) {
        sum += raw_coeffs[j] * basis->responses()[j].fn(u);
    }
    return sum;
}

SampleSet grappa_sample(const IcdfApprox& approx, Rng& rng, std::size_t n) {
    if (!approx.basis) {
        throw ArgumentError("grappa_sample: approximation has no basis");
    }
    SampleSet samples;
    samples.provenance =
        Provenance{"grappa", rng.seed(),
                   "grappa(K=" + std::to_string(approx.basis->size()) + "," +
                       approx.target_id + ")"};
    samples.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples.values.push_back(approx(rng.next_double()));
    }
    return samples;
}

std::function<double(double)> quantile_of(const Dist& dist) {
    return [dist](double u) { return dist.icdf(u); };
}

std::function<double(double)> lognormal_quantile(double log_mean, double log_stddev) {
    if (!(log_stddev > 0.0)) {
        throw ArgumentError("lognormal_quantile: log_stddev must be > 0");
    }
    return [log_mean, log_stddev](double u) {
        return std::exp(log_mean + log_stddev * standard_normal_icdf(u));
    };
}

std::function<double(double)> exponential_quantile(double rate) {
    if (!(rate > 0.0)) {
        throw ArgumentError("exponential_quantile: rate must be > 0");
    }
    return [rate](double u) { return -std::log(1.0 - u) / rate; };
}

} // namespace uprop::pprvg
