// Command-line front end for the uncertainty-propagation benchmark library.
// Talks to the core exclusively through the C API in uprop.h.

#include "uprop.h"

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

constexpr double kTwoOverPi = 0.63661977236758134;

std::string default_out_dir() {
    const char* env = std::getenv("UPROP_OUT_DIR");
    return env != nullptr && env[0] != '\0' ? env : "out";
}

int fail(uprop_status status) {
    std::fprintf(stderr, "error: %s\n", uprop_last_error());
    switch (status) {
    case UPROP_ERR_NUMERIC:
        return 3;
    default:
        return 2; // argument/config/io problems are configuration errors
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo and fixed-size distributional uncertainty propagation "
                 "benchmark (library version " +
                 std::string(uprop_version()) + ")"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run one app/method experiment grid");
    std::string run_app = "convergence-challenge";
    std::string run_method = "monte-carlo";
    std::vector<std::uint64_t> run_params;
    std::uint32_t run_reps = 30;
    std::uint64_t run_seed = 1;
    std::string run_out = default_out_dir();
    double run_delay = 0.0;
    std::uint64_t run_gt_samples = 1000000;
    run->add_option("--app", run_app, "convergence-challenge | poiseuille | buffon");
    run->add_option("--method", run_method, "monte-carlo | dirac-prop | spot | grappa");
    run->add_option("--params", run_params,
                    "sample counts n (sampling methods) or representation sizes r "
                    "(dirac-prop)")
        ->required()
        ->delimiter(',');
    run->add_option("--reps", run_reps, "repetitions per parameter (default 30)");
    run->add_option("--seed", run_seed, "master seed for the derived seed schedule");
    run->add_option("--out", run_out, "output directory (default $UPROP_OUT_DIR or out)");
    run->add_option("--delay-s", run_delay, "sleep before each repetition, seconds");
    run->add_option("--gt-samples", run_gt_samples,
                    "ground-truth sample count (default 1000000)");

    // report
    auto* report = app.add_subcommand("report", "Summarize record CSVs into Pareto "
                                                "SVGs and a table");
    std::vector<std::string> report_csvs;
    std::string report_out = default_out_dir();
    report->add_option("csvs", report_csvs, "record CSV files")->required();
    report->add_option("--out", report_out, "output directory");

    // buffon
    auto* buffon = app.add_subcommand("buffon", "Needle-drop estimate of 2/pi");
    std::uint64_t buffon_n = 1000000;
    std::uint64_t buffon_seed = 1;
    buffon->add_option("--n", buffon_n, "number of needle drops");
    buffon->add_option("--seed", buffon_seed, "rng seed");

    // plot-pushforward
    auto* plot = app.add_subcommand("plot-pushforward",
                                    "Input density / transform / output density SVG");
    std::string plot_app = "convergence-challenge";
    std::string plot_out;
    plot->add_option("--app", plot_app, "convergence-challenge | poiseuille");
    plot->add_option("--out", plot_out, "output SVG path (default <outdir>/pushforward_<app>.svg)");

    // pprvg-fit
    auto* fit = app.add_subcommand("pprvg-fit",
                                   "Fit a target quantile with the simulated "
                                   "generators and report quality");
    std::string fit_target = "uniform";
    std::uint32_t fit_k = 2;
    std::uint64_t fit_seed = 1;
    std::uint64_t fit_samples = 100000;
    fit->add_option("--target", fit_target,
                    "uniform | gaussian | lognormal | exponential | mixture");
    fit->add_option("--k", fit_k, "number of basis responses (1..8)");
    fit->add_option("--seed", fit_seed, "rng seed");
    fit->add_option("--samples", fit_samples, "sample count for the W1 quality check");

    // ground-truth
    auto* gt = app.add_subcommand("ground-truth",
                                  "Generate or load the cached Monte Carlo ground truth");
    std::string gt_app = "convergence-challenge";
    std::uint64_t gt_seed = 1;
    std::uint64_t gt_n = 1000000;
    std::string gt_out = default_out_dir();
    gt->add_option("--app", gt_app, "convergence-challenge | poiseuille | buffon");
    gt->add_option("--seed", gt_seed, "rng seed");
    gt->add_option("--samples", gt_n, "sample count");
    gt->add_option("--out", gt_out, "cache directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) {
        uprop_run_config config{};
        config.app = run_app.c_str();
        config.method = run_method.c_str();
        config.params = run_params.data();
        config.n_params = run_params.size();
        config.repetitions = run_reps;
        config.seed = run_seed;
        config.out_dir = run_out.c_str();
        config.delay_s = run_delay;
        config.gt_samples = run_gt_samples;
        char csv_path[1024] = {0};
        if (const auto status = uprop_run_experiment(&config, csv_path, sizeof(csv_path))) {
            return fail(status);
        }
        std::printf("records: %s\n", csv_path);
        return 0;
    }

    if (report->parsed()) {
        std::vector<const char*> paths;
        paths.reserve(report_csvs.size());
        for (const std::string& path : report_csvs) {
            paths.push_back(path.c_str());
        }
        if (const auto status = uprop_report(paths.data(), paths.size(),
                                             report_out.c_str())) {
            return fail(status);
        }
        std::printf("report written to %s (summary.txt, pareto_<app>.svg)\n",
                    report_out.c_str());
        return 0;
    }

    if (buffon->parsed()) {
        double estimate = 0.0;
        if (const auto status = uprop_buffon(buffon_seed, buffon_n, &estimate)) {
            return fail(status);
        }
        std::printf("crossing fraction: %.6f (2/pi = %.6f, |error| = %.6f, n = %" PRIu64
                    ")\n",
                    estimate, kTwoOverPi, std::abs(estimate - kTwoOverPi), buffon_n);
        return 0;
    }

    if (plot->parsed()) {
        std::string out_path = plot_out;
        if (out_path.empty()) {
            out_path = default_out_dir() + "/pushforward_" + plot_app + ".svg";
        }
        if (const auto status = uprop_plot_pushforward(plot_app.c_str(), out_path.c_str())) {
            return fail(status);
        }
        std::printf("pushforward plot: %s\n", out_path.c_str());
        return 0;
    }

    if (fit->parsed()) {
        uprop_pprvg_fit_report rep{};
        if (const auto status = uprop_pprvg_fit(fit_target.c_str(), fit_k, fit_seed,
                                                fit_samples, &rep)) {
            return fail(status);
        }
        std::printf("target: %s  K=%u  samples=%" PRIu64 "\n", fit_target.c_str(), rep.k,
                    rep.samples);
        std::printf("  basis orthonormality error: %.3e (condition est. %.3g)\n",
                    rep.basis_orthonormality_error, rep.basis_condition_estimate);
        std::printf("  fit residual (L2):          %.6e\n", rep.fit_residual);
        std::printf("  monotonicity defect:        %.6e\n", rep.monotonicity_defect);
        std::printf("  sampling noise floor (W1):  %.6e\n", rep.sampling_noise_floor);
        std::printf("  grappa sample W1:           %.6e\n", rep.grappa_w1);
        if (rep.spot_supported) {
            std::printf("  spot sample W1:             %.6e\n", rep.spot_w1);
        } else {
            std::printf("  spot: target not expressible as a Gaussian mixture program\n");
        }
        return 0;
    }

    if (gt->parsed()) {
        char path[1024] = {0};
        if (const auto status = uprop_ground_truth(gt_app.c_str(), gt_seed, gt_n,
                                                   gt_out.c_str(), path, sizeof(path))) {
            return fail(status);
        }
        std::printf("ground truth: %s\n", path);
        return 0;
    }

    return 2;
}
