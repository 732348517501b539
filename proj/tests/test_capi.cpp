#include <doctest.h>

#include "uprop.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

namespace {

struct DistGuard {
    uprop_dist* handle = nullptr;
    ~DistGuard() { uprop_dist_free(handle); }
};
struct RngGuard {
    uprop_rng* handle = nullptr;
    ~RngGuard() { uprop_rng_free(handle); }
};
struct SamplesGuard {
    uprop_samples* handle = nullptr;
    ~SamplesGuard() { uprop_samples_free(handle); }
};
struct DiracGuard {
    uprop_dirac* handle = nullptr;
    ~DiracGuard() { uprop_dirac_free(handle); }
};

} // namespace

TEST_CASE("version and error text") {
    CHECK(std::string(uprop_version()) == "0.1.0");
    DistGuard bad;
    CHECK(uprop_dist_uniform(2.0, 1.0, &bad.handle) == UPROP_ERR_ARGUMENT);
    CHECK(std::string(uprop_last_error()).find("uniform") != std::string::npos);
}

TEST_CASE("distribution lifecycle through the c api") {
    DistGuard gaussian;
    REQUIRE(uprop_dist_gaussian(0.0, 1.0, &gaussian.handle) == UPROP_OK);
    double value = 0.0;
    CHECK(uprop_dist_pdf(gaussian.handle, 0.0, &value) == UPROP_OK);
    CHECK(value == doctest::Approx(0.39894228040143268));
    CHECK(uprop_dist_cdf(gaussian.handle, 0.0, &value) == UPROP_OK);
    CHECK(value == doctest::Approx(0.5));
    CHECK(uprop_dist_icdf(gaussian.handle, 0.5, &value) == UPROP_OK);
    CHECK(std::abs(value) <= 1e-12);
    CHECK(uprop_dist_icdf(gaussian.handle, 1.5, &value) == UPROP_ERR_ARGUMENT);

    const double weights[] = {0.6, 0.4};
    const double means[] = {2.0, -1.0};
    const double stds[] = {0.5, 1.0};
    DistGuard mixture;
    REQUIRE(uprop_dist_gaussian_mixture(weights, means, stds, 2, &mixture.handle) ==
            UPROP_OK);
    CHECK(uprop_dist_mean(mixture.handle, &value) == UPROP_OK);
    CHECK(value == doctest::Approx(0.8));
    CHECK(uprop_dist_variance(mixture.handle, &value) == UPROP_OK);
    CHECK(value == doctest::Approx(2.71));

    char config[256];
    REQUIRE(uprop_dist_format(mixture.handle, config, sizeof(config)) == UPROP_OK);
    DistGuard parsed;
    REQUIRE(uprop_dist_parse(config, &parsed.handle) == UPROP_OK);
    char config2[256];
    REQUIRE(uprop_dist_format(parsed.handle, config2, sizeof(config2)) == UPROP_OK);
    CHECK(std::string(config) == config2);

    char tiny[4];
    CHECK(uprop_dist_format(mixture.handle, tiny, sizeof(tiny)) == UPROP_ERR_ARGUMENT);
    DistGuard broken;
    CHECK(uprop_dist_parse("kind=???", &broken.handle) == UPROP_ERR_ARGUMENT);
    CHECK(uprop_dist_uniform(0.0, 1.0, nullptr) == UPROP_ERR_ARGUMENT);
}

TEST_CASE("sampling through the c api") {
    RngGuard rng;
    REQUIRE(uprop_rng_new(nullptr, 42, &rng.handle) == UPROP_OK);
    SamplesGuard uniform;
    REQUIRE(uprop_sample_uniform(rng.handle, 1000, &uniform.handle) == UPROP_OK);
    CHECK(uprop_samples_size(uniform.handle) == 1000);
    const double* data = uprop_samples_data(uniform.handle);
    REQUIRE(data != nullptr);
    CHECK(data[0] == doctest::Approx(0.8143051451229099).epsilon(1e-15));

    RngGuard bad_rng;
    CHECK(uprop_rng_new("lcg", 1, &bad_rng.handle) == UPROP_ERR_ARGUMENT);

    double mean = 0.0;
    double variance = 0.0;
    REQUIRE(uprop_samples_mean_variance(uniform.handle, &mean, &variance) == UPROP_OK);
    CHECK(mean > 0.4);
    CHECK(mean < 0.6);

    DistGuard dist;
    REQUIRE(uprop_dist_uniform(2.0, 4.0, &dist.handle) == UPROP_OK);
    SamplesGuard drawn;
    REQUIRE(uprop_sample_icdf(rng.handle, dist.handle, 500, &drawn.handle) == UPROP_OK);
    CHECK(uprop_samples_size(drawn.handle) == 500);

    const char* path = "/tmp/uprop_capi_samples.csv";
    REQUIRE(uprop_samples_write_csv(drawn.handle, path) == UPROP_OK);
    SamplesGuard loaded;
    REQUIRE(uprop_samples_read_csv(path, &loaded.handle) == UPROP_OK);
    REQUIRE(uprop_samples_size(loaded.handle) == 500);
    CHECK(std::memcmp(uprop_samples_data(loaded.handle), uprop_samples_data(drawn.handle),
                      500 * sizeof(double)) == 0);
    SamplesGuard missing;
    CHECK(uprop_samples_read_csv("/tmp/uprop_missing_file.csv", &missing.handle) ==
          UPROP_ERR_IO);
}

TEST_CASE("dirac handles through the c api") {
    DistGuard dist;
    REQUIRE(uprop_dist_gaussian(3.0, 2.0, &dist.handle) == UPROP_OK);
    DiracGuard dirac;
    REQUIRE(uprop_dirac_from_dist(dist.handle, 64, &dirac.handle) == UPROP_OK);
    CHECK(uprop_dirac_size(dirac.handle) == 64);
    double mean = 0.0;
    double variance = 0.0;
    REQUIRE(uprop_dirac_moments(dirac.handle, &mean, &variance) == UPROP_OK);
    CHECK(mean == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(variance < 4.0); // quantile discretization shaves tail variance

    DiracGuard too_small;
    CHECK(uprop_dirac_from_dist(dist.handle, 1, &too_small.handle) ==
          UPROP_ERR_ARGUMENT);

    RngGuard rng;
    REQUIRE(uprop_rng_new("xoshiro256++", 7, &rng.handle) == UPROP_OK);
    SamplesGuard drawn;
    REQUIRE(uprop_dirac_sample(dirac.handle, rng.handle, 2000, &drawn.handle) ==
            UPROP_OK);
    CHECK(uprop_samples_size(drawn.handle) == 2000);

    const char* path = "/tmp/uprop_capi_dirac.csv";
    REQUIRE(uprop_dirac_write_csv(dirac.handle, path) == UPROP_OK);
    CHECK(std::filesystem::exists(path));

    double w1 = -1.0;
    REQUIRE(uprop_wasserstein1_discrete(dirac.handle, drawn.handle, &w1) == UPROP_OK);
    CHECK(w1 >= 0.0);
}

TEST_CASE("wasserstein through the c api") {
    RngGuard rng;
    REQUIRE(uprop_rng_new(nullptr, 3, &rng.handle) == UPROP_OK);
    SamplesGuard a;
    SamplesGuard b;
    REQUIRE(uprop_sample_gaussian(rng.handle, 0.0, 1.0, 5000, &a.handle) == UPROP_OK);
    REQUIRE(uprop_sample_gaussian(rng.handle, 1.0, 1.0, 5000, &b.handle) == UPROP_OK);
    double w1 = 0.0;
    REQUIRE(uprop_wasserstein1(a.handle, b.handle, &w1) == UPROP_OK);
    CHECK(std::abs(w1 - 1.0) <= 0.1);
    CHECK(uprop_wasserstein1(a.handle, nullptr, &w1) == UPROP_ERR_ARGUMENT);
}

TEST_CASE("benchmark surface through the c api") {
    double estimate = 0.0;
    REQUIRE(uprop_buffon(9, 200000, &estimate) == UPROP_OK);
    CHECK(std::abs(estimate - 0.63661977236758134) <= 0.004);

    const std::string dir = "/tmp/uprop_capi_bench";
    std::filesystem::remove_all(dir);

    const uint64_t params[] = {64, 128};
    uprop_run_config config{};
    config.app = "convergence-challenge";
    config.method = "monte-carlo";
    config.params = params;
    config.n_params = 2;
    config.repetitions = 3;
    config.seed = 5;
    const std::string out_dir = dir + "/run";
    config.out_dir = out_dir.c_str();
    config.gt_samples = 20000;
    char csv_path[512] = {0};
    REQUIRE(uprop_run_experiment(&config, csv_path, sizeof(csv_path)) == UPROP_OK);
    CHECK(std::filesystem::exists(csv_path));

    const char* paths[] = {csv_path};
    const std::string report_dir = dir + "/report";
    REQUIRE(uprop_report(paths, 1, report_dir.c_str()) == UPROP_OK);
    CHECK(std::filesystem::exists(report_dir + "/summary.txt"));
    CHECK(std::filesystem::exists(report_dir + "/pareto_convergence-challenge.svg"));

    config.method = "dirac-prop";
    config.params = params;
    REQUIRE(uprop_run_experiment(&config, csv_path, sizeof(csv_path)) == UPROP_OK);

    config.app = "buffon";
    config.method = "dirac-prop";
    CHECK(uprop_run_experiment(&config, csv_path, sizeof(csv_path)) ==
          UPROP_ERR_ARGUMENT);

    const std::string plot_path = dir + "/pushforward.svg";
    REQUIRE(uprop_plot_pushforward("convergence-challenge", plot_path.c_str()) ==
            UPROP_OK);
    CHECK(std::filesystem::exists(plot_path));
    CHECK(uprop_plot_pushforward("buffon", plot_path.c_str()) == UPROP_ERR_ARGUMENT);

    uprop_pprvg_fit_report fit{};
    REQUIRE(uprop_pprvg_fit("uniform", 2, 1, 20000, &fit) == UPROP_OK);
    CHECK(fit.fit_residual <= 1e-8);
    CHECK(uprop_pprvg_fit("cauchy", 2, 1, 0, &fit) == UPROP_ERR_ARGUMENT);

    char gt_path[512] = {0};
    const std::string gt_dir = dir + "/gt";
    REQUIRE(uprop_ground_truth("convergence-challenge", 4, 50000, gt_dir.c_str(),
                               gt_path, sizeof(gt_path)) == UPROP_OK);
    CHECK(std::filesystem::exists(gt_path));
}
