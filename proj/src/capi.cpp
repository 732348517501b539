#include "uprop.h"

#include "uprop/bench.hpp"
#include "uprop/dirac.hpp"
#include "uprop/dist.hpp"
#include "uprop/errors.hpp"
#include "uprop/metrics.hpp"
#include "uprop/report.hpp"
#include "uprop/rng.hpp"
#include "uprop/sampling.hpp"
#include "uprop/version.hpp"

#include <cstring>
#include <string>

struct uprop_dist {
    uprop::Dist dist;
};
struct uprop_rng {
    uprop::Rng rng;
};
struct uprop_samples {
    uprop::SampleSet samples;
};
struct uprop_dirac {
    uprop::dirac::DiracMixture mixture;
};

namespace {

thread_local std::string g_last_error;

uprop_status set_error(uprop_status status, const char* what) {
    g_last_error = what;
    return status;
}

template <typename Fn>
uprop_status guarded(Fn&& fn) {
    try {
        fn();
        return UPROP_OK;
    } catch (const uprop::ArgumentError& err) {
        return set_error(UPROP_ERR_ARGUMENT, err.what());
    } catch (const uprop::NumericError& err) {
        return set_error(UPROP_ERR_NUMERIC, err.what());
    } catch (const uprop::IoError& err) {
        return set_error(UPROP_ERR_IO, err.what());
    } catch (const std::exception& err) {
        return set_error(UPROP_ERR_NUMERIC, err.what());
    } catch (...) {
        return set_error(UPROP_ERR_NUMERIC, "unknown error");
    }
}

uprop_status require(bool ok, const char* what) {
    return ok ? UPROP_OK : set_error(UPROP_ERR_ARGUMENT, what);
}

uprop_status copy_string(const std::string& value, char* buffer, size_t buffer_len,
                         const char* what) {
    if (buffer == nullptr || buffer_len == 0) {
        return UPROP_OK; // caller did not ask for the string
    }
    if (value.size() + 1 > buffer_len) {
        return set_error(UPROP_ERR_ARGUMENT, what);
    }
    std::memcpy(buffer, value.c_str(), value.size() + 1);
    return UPROP_OK;
}

} // namespace

extern "C" {

const char* uprop_version(void) {
    return uprop::kVersion;
}

const char* uprop_last_error(void) {
    return g_last_error.c_str();
}

uprop_status uprop_dist_uniform(double lower, double upper, uprop_dist** out) {
    if (auto bad = require(out != nullptr, "uprop_dist_uniform: out is NULL")) return bad;
    return guarded([&] { *out = new uprop_dist{{uprop::Dist::uniform(lower, upper)}}; });
}

uprop_status uprop_dist_gaussian(double mean, double stddev, uprop_dist** out) {
    if (auto bad = require(out != nullptr, "uprop_dist_gaussian: out is NULL")) return bad;
    return guarded([&] { *out = new uprop_dist{{uprop::Dist::gaussian(mean, stddev)}}; });
}

uprop_status uprop_dist_gaussian_mixture(const double* weights, const double* means,
                                         const double* stddevs, size_t count,
                                         uprop_dist** out) {
    if (auto bad = require(out != nullptr && weights != nullptr && means != nullptr &&
                               stddevs != nullptr && count > 0,
                           "uprop_dist_gaussian_mixture: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        std::vector<uprop::MixtureComponent> comps;
        comps.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            comps.push_back({weights[i], means[i], stddevs[i]});
        }
        *out = new uprop_dist{{uprop::Dist::gaussian_mixture(std::move(comps))}};
    });
}

uprop_status uprop_dist_bernoulli(double p, uprop_dist** out) {
    if (auto bad = require(out != nullptr, "uprop_dist_bernoulli: out is NULL")) return bad;
    return guarded([&] { *out = new uprop_dist{{uprop::Dist::bernoulli(p)}}; });
}

uprop_status uprop_dist_parse(const char* config, uprop_dist** out) {
    if (auto bad = require(config != nullptr && out != nullptr,
                           "uprop_dist_parse: bad arguments")) {
        return bad;
    }
    return guarded([&] { *out = new uprop_dist{{uprop::Dist::from_config(config)}}; });
}

uprop_status uprop_dist_format(const uprop_dist* dist, char* buffer, size_t buffer_len) {
    if (auto bad = require(dist != nullptr && buffer != nullptr,
                           "uprop_dist_format: bad arguments")) {
        return bad;
    }
    uprop_status status = UPROP_OK;
    const uprop_status run = guarded([&] {
        status = copy_string(dist->dist.to_config(), buffer, buffer_len,
                             "uprop_dist_format: buffer too small");
    });
    return run != UPROP_OK ? run : status;
}

uprop_status uprop_dist_pdf(const uprop_dist* dist, double x, double* out) {
    if (auto bad = require(dist != nullptr && out != nullptr, "uprop_dist_pdf: bad arguments"))
        return bad;
    return guarded([&] { *out = dist->dist.pdf(x); });
}

uprop_status uprop_dist_cdf(const uprop_dist* dist, double x, double* out) {
    if (auto bad = require(dist != nullptr && out != nullptr, "uprop_dist_cdf: bad arguments"))
        return bad;
    return guarded([&] { *out = dist->dist.cdf(x); });
}

uprop_status uprop_dist_icdf(const uprop_dist* dist, double u, double* out) {
    if (auto bad = require(dist != nullptr && out != nullptr, "uprop_dist_icdf: bad arguments"))
        return bad;
    return guarded([&] { *out = dist->dist.icdf(u); });
}

uprop_status uprop_dist_mean(const uprop_dist* dist, double* out) {
    if (auto bad = require(dist != nullptr && out != nullptr, "uprop_dist_mean: bad arguments"))
        return bad;
    return guarded([&] { *out = dist->dist.mean(); });
}

uprop_status uprop_dist_variance(const uprop_dist* dist, double* out) {
    if (auto bad = require(dist != nullptr && out != nullptr,
                           "uprop_dist_variance: bad arguments")) {
        return bad;
    }
    return guarded([&] { *out = dist->dist.variance(); });
}

void uprop_dist_free(uprop_dist* dist) {
    delete dist;
}

uprop_status uprop_rng_new(const char* algorithm, uint64_t seed, uprop_rng** out) {
    if (auto bad = require(out != nullptr, "uprop_rng_new: out is NULL")) return bad;
    return guarded([&] {
        *out = new uprop_rng{
            {uprop::Rng(seed, algorithm != nullptr ? algorithm : "xoshiro256++")}};
    });
}

void uprop_rng_free(uprop_rng* rng) {
    delete rng;
}

uprop_status uprop_sample_uniform(uprop_rng* rng, size_t n, uprop_samples** out) {
    if (auto bad = require(rng != nullptr && out != nullptr,
                           "uprop_sample_uniform: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = new uprop_samples{{uprop::mc::sample_uniform(rng->rng, n)}};
    });
}

uprop_status uprop_sample_gaussian(uprop_rng* rng, double mean, double stddev, size_t n,
                                   uprop_samples** out) {
    if (auto bad = require(rng != nullptr && out != nullptr,
                           "uprop_sample_gaussian: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = new uprop_samples{{uprop::mc::sample_gaussian(rng->rng, mean, stddev, n)}};
    });
}

uprop_status uprop_sample_icdf(uprop_rng* rng, const uprop_dist* dist, size_t n,
                               uprop_samples** out) {
    if (auto bad = require(rng != nullptr && dist != nullptr && out != nullptr,
                           "uprop_sample_icdf: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = new uprop_samples{{uprop::mc::sample_icdf(rng->rng, dist->dist, n)}};
    });
}

size_t uprop_samples_size(const uprop_samples* samples) {
    return samples != nullptr ? samples->samples.size() : 0;
}

const double* uprop_samples_data(const uprop_samples* samples) {
    return samples != nullptr ? samples->samples.values.data() : nullptr;
}

uprop_status uprop_samples_mean_variance(const uprop_samples* samples, double* mean,
                                         double* variance) {
    if (auto bad = require(samples != nullptr && mean != nullptr && variance != nullptr,
                           "uprop_samples_mean_variance: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        const auto stats = uprop::summarize_samples(samples->samples);
        *mean = stats.mean;
        *variance = stats.variance;
    });
}

uprop_status uprop_samples_write_csv(const uprop_samples* samples, const char* path) {
    if (auto bad = require(samples != nullptr && path != nullptr,
                           "uprop_samples_write_csv: bad arguments")) {
        return bad;
    }
    return guarded([&] { uprop::write_samples_csv(samples->samples, path); });
}

uprop_status uprop_samples_read_csv(const char* path, uprop_samples** out) {
    if (auto bad = require(path != nullptr && out != nullptr,
                           "uprop_samples_read_csv: bad arguments")) {
        return bad;
    }
    return guarded([&] { *out = new uprop_samples{{uprop::read_samples_csv(path)}}; });
}

void uprop_samples_free(uprop_samples* samples) {
    delete samples;
}

uprop_status uprop_dirac_from_dist(const uprop_dist* dist, size_t r, uprop_dirac** out) {
    if (auto bad = require(dist != nullptr && out != nullptr,
                           "uprop_dirac_from_dist: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = new uprop_dirac{{uprop::dirac::from_dist(dist->dist, r)}};
    });
}

size_t uprop_dirac_size(const uprop_dirac* d) {
    return d != nullptr ? d->mixture.size() : 0;
}

uprop_status uprop_dirac_moments(const uprop_dirac* d, double* mean, double* variance) {
    if (auto bad = require(d != nullptr && mean != nullptr && variance != nullptr,
                           "uprop_dirac_moments: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        const auto stats = uprop::dirac::moments(d->mixture);
        *mean = stats.mean;
        *variance = stats.variance;
    });
}

uprop_status uprop_dirac_sample(const uprop_dirac* d, uprop_rng* rng, size_t n,
                                uprop_samples** out) {
    if (auto bad = require(d != nullptr && rng != nullptr && out != nullptr,
                           "uprop_dirac_sample: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = new uprop_samples{{uprop::dirac::sample_repr(d->mixture, rng->rng, n)}};
    });
}

uprop_status uprop_dirac_write_csv(const uprop_dirac* d, const char* path) {
    if (auto bad = require(d != nullptr && path != nullptr,
                           "uprop_dirac_write_csv: bad arguments")) {
        return bad;
    }
    return guarded([&] { uprop::dirac::write_dirac_csv(d->mixture, path); });
}

void uprop_dirac_free(uprop_dirac* d) {
    delete d;
}

uprop_status uprop_wasserstein1(const uprop_samples* a, const uprop_samples* b,
                                double* out) {
    if (auto bad = require(a != nullptr && b != nullptr && out != nullptr,
                           "uprop_wasserstein1: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = uprop::metrics::wasserstein1(a->samples, b->samples).distance;
    });
}

uprop_status uprop_wasserstein1_discrete(const uprop_dirac* d, const uprop_samples* b,
                                         double* out) {
    if (auto bad = require(d != nullptr && b != nullptr && out != nullptr,
                           "uprop_wasserstein1_discrete: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        *out = uprop::metrics::wasserstein1_discrete(d->mixture, b->samples).distance;
    });
}

uprop_status uprop_run_experiment(const uprop_run_config* config, char* csv_path_buf,
                                  size_t csv_path_len) {
    if (auto bad = require(config != nullptr && config->app != nullptr &&
                               config->method != nullptr && config->params != nullptr &&
                               config->n_params > 0,
                           "uprop_run_experiment: bad config")) {
        return bad;
    }
    uprop_status copy_status = UPROP_OK;
    const uprop_status run = guarded([&] {
        uprop::bench::ExperimentConfig cfg;
        cfg.app = uprop::bench::app_from_name(config->app);
        cfg.method = uprop::bench::method_from_name(config->method);
        cfg.params.assign(config->params, config->params + config->n_params);
        cfg.repetitions = config->repetitions != 0 ? config->repetitions : 30;
        cfg.master_seed = config->seed;
        cfg.out_dir = config->out_dir != nullptr ? config->out_dir : "out";
        cfg.delay_s = config->delay_s;
        cfg.gt_samples = config->gt_samples != 0 ? config->gt_samples : 1000000;
        std::string csv_path;
        uprop::bench::run_experiment(cfg, &csv_path);
        copy_status = copy_string(csv_path, csv_path_buf, csv_path_len,
                                  "uprop_run_experiment: path buffer too small");
    });
    return run != UPROP_OK ? run : copy_status;
}

uprop_status uprop_report(const char* const* csv_paths, size_t n_paths,
                          const char* out_dir) {
    if (auto bad = require(csv_paths != nullptr && n_paths > 0 && out_dir != nullptr,
                           "uprop_report: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        std::vector<std::string> paths;
        paths.reserve(n_paths);
        for (size_t i = 0; i < n_paths; ++i) {
            if (csv_paths[i] == nullptr) {
                throw uprop::ArgumentError("uprop_report: NULL path");
            }
            paths.emplace_back(csv_paths[i]);
        }
        uprop::report::report_pareto(paths, out_dir);
    });
}

uprop_status uprop_buffon(uint64_t seed, uint64_t n, double* estimate) {
    if (auto bad = require(estimate != nullptr, "uprop_buffon: estimate is NULL")) return bad;
    return guarded([&] { *estimate = uprop::bench::buffon(seed, n); });
}

uprop_status uprop_plot_pushforward(const char* app, const char* out_path) {
    if (auto bad = require(app != nullptr && out_path != nullptr,
                           "uprop_plot_pushforward: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        uprop::report::plot_pushforward(uprop::bench::app_from_name(app), out_path);
    });
}

uprop_status uprop_pprvg_fit(const char* target, uint32_t k, uint64_t seed,
                             uint64_t samples, uprop_pprvg_fit_report* out) {
    if (auto bad = require(target != nullptr && out != nullptr,
                           "uprop_pprvg_fit: bad arguments")) {
        return bad;
    }
    return guarded([&] {
        const auto report = uprop::bench::pprvg_fit(
            target, k, seed, samples != 0 ? samples : 100000);
        out->k = report.k;
        out->basis_orthonormality_error = report.basis_orthonormality_error;
        out->basis_condition_estimate = report.basis_condition_estimate;
        out->fit_residual = report.fit_residual;
        out->monotonicity_defect = report.monotonicity_defect;
        out->grappa_w1 = report.grappa_w1;
        out->sampling_noise_floor = report.sampling_noise_floor;
        out->spot_supported = report.spot_supported ? 1 : 0;
        out->spot_w1 = report.spot_w1;
        out->samples = report.samples;
    });
}

uprop_status uprop_ground_truth(const char* app, uint64_t seed, uint64_t n,
                                const char* out_dir, char* path_buf, size_t path_len) {
    if (auto bad = require(app != nullptr && out_dir != nullptr,
                           "uprop_ground_truth: bad arguments")) {
        return bad;
    }
    uprop_status copy_status = UPROP_OK;
    const uprop_status run = guarded([&] {
        const auto parsed = uprop::bench::app_from_name(app);
        uprop::bench::ground_truth(parsed, seed, n, out_dir);
        uprop::metrics::GroundTruthCache cache{std::string(out_dir)};
        copy_status = copy_string(cache.path_for(app, seed, n), path_buf, path_len,
                                  "uprop_ground_truth: path buffer too small");
    });
    return run != UPROP_OK ? run : copy_status;
}

} // extern "C"
