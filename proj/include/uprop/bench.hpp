#pragma once

#include "uprop/dist.hpp"
#include "uprop/expr.hpp"
#include "uprop/metrics.hpp"
#include "uprop/samples.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uprop::bench {

enum class App { ConvergenceChallenge, Poiseuille, Buffon };
enum class Method { MonteCarlo, DiracProp, Spot, Grappa };

App app_from_name(const std::string& name);
Method method_from_name(const std::string& name);
std::string app_name(App app);
std::string method_name(Method method);

/// Built-in application: named input distributions and the output expression.
struct AppSpec {
    std::string name;
    std::vector<std::pair<std::string, Dist>> inputs;
    Expr expr;
    std::string output_units;
};

AppSpec make_app_spec(App app);

/// Two-component Gaussian mixture used as the multimodal challenge input:
/// weights 0.6/0.4, means 2/-1, stddevs 0.5/1.
Dist challenge_input_mixture();

struct ExperimentConfig {
    App app = App::ConvergenceChallenge;
    Method method = Method::MonteCarlo;
    std::vector<std::uint64_t> params; // n values or r values
    std::uint32_t repetitions = 30;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    double delay_s = 0.0;
    std::uint64_t gt_samples = 1000000;
    std::uint32_t grappa_k = 8;
};

/// Runs every (param, repetition) cell: builds inputs, times the sampling +
/// evaluation block, computes W1 against the cached ground truth outside the
/// timed block, and writes the records CSV. Seeds follow
/// derive_seed(master, param, repetition). Returns the records; csv_path_out
/// (optional) receives the CSV location.
std::vector<metrics::RunRecord> run_experiment(const ExperimentConfig& config,
                                               std::string* csv_path_out = nullptr);

/// 10^6-sample (by default n) Monte Carlo output for the app, disk-cached.
SampleSet ground_truth(App app, std::uint64_t seed, std::uint64_t n,
                       const std::string& cache_dir);

double buffon(std::uint64_t seed, std::uint64_t n);

struct PprvgFitReport {
    std::string target;
    std::uint32_t k = 0;
    double basis_orthonormality_error = 0.0;
    double basis_condition_estimate = 0.0;
    double fit_residual = 0.0;
    double monotonicity_defect = 0.0;
    double grappa_w1 = 0.0;
    double sampling_noise_floor = 0.0;
    bool spot_supported = false;
    double spot_w1 = 0.0;
    std::uint64_t samples = 0;
};

/// Fits the named target ("uniform", "gaussian", "lognormal", "exponential",
/// "mixture") with the built-in response family at size k, then reports fit
/// residual and sample-quality W1 for Grappa (and Spot where the target is a
/// Gaussian or mixture).
PprvgFitReport pprvg_fit(const std::string& target, std::uint32_t k, std::uint64_t seed,
                         std::uint64_t samples = 100000);

} // namespace uprop::bench
