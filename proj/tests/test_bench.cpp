#include <doctest.h>

#include "uprop/bench.hpp"
#include "uprop/errors.hpp"
#include "uprop/metrics.hpp"
#include "uprop/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace uprop;
using bench::App;
using bench::ExperimentConfig;
using bench::Method;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentConfig tiny_config(App app, Method method, const std::string& dir) {
    ExperimentConfig config;
    config.app = app;
    config.method = method;
    config.params = {64, 128};
    config.repetitions = 3;
    config.master_seed = 11;
    config.out_dir = dir;
    config.gt_samples = 20000;
    return config;
}

} // namespace

TEST_CASE("app and method name round trips") {
    for (App app : {App::ConvergenceChallenge, App::Poiseuille, App::Buffon}) {
        CHECK(bench::app_from_name(bench::app_name(app)) == app);
    }
    for (Method m : {Method::MonteCarlo, Method::DiracProp, Method::Spot, Method::Grappa}) {
        CHECK(bench::method_from_name(bench::method_name(m)) == m);
    }
    CHECK_THROWS_AS((void)bench::app_from_name("roulette"), ArgumentError);
    CHECK_THROWS_AS((void)bench::method_from_name("quasi"), ArgumentError);
}

TEST_CASE("run_experiment writes a complete records csv") {
    const std::string dir = "/tmp/uprop_bench_mc";
    std::filesystem::remove_all(dir);
    std::string csv_path;
    const auto records = bench::run_experiment(
        tiny_config(App::ConvergenceChallenge, Method::MonteCarlo, dir), &csv_path);
    CHECK(records.size() == 2 * 3);
    REQUIRE(std::filesystem::exists(csv_path));
    const auto back = metrics::read_records_csv(csv_path);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].param == records[i].param);
        CHECK(back[i].seed == records[i].seed);
    }
    // Seed schedule is a pure function of (master, param, repetition).
    for (const auto& rec : records) {
        CHECK(rec.seed == derive_seed(11, rec.param, rec.repetition));
    }
}

TEST_CASE("run_experiment is reproducible for fixed seeds") {
    const std::string dir_a = "/tmp/uprop_bench_repro_a";
    const std::string dir_b = "/tmp/uprop_bench_repro_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    const auto a =
        bench::run_experiment(tiny_config(App::Poiseuille, Method::MonteCarlo, dir_a));
    const auto b =
        bench::run_experiment(tiny_config(App::Poiseuille, Method::MonteCarlo, dir_b));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].wasserstein == b[i].wasserstein); // runtime differs, accuracy not
        CHECK(a[i].seed == b[i].seed);
    }
}

TEST_CASE("dirac-prop runs write deterministic representation csvs") {
    const std::string dir_a = "/tmp/uprop_bench_dirac_a";
    const std::string dir_b = "/tmp/uprop_bench_dirac_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    auto config = tiny_config(App::ConvergenceChallenge, Method::DiracProp, dir_a);
    config.params = {16, 32};
    bench::run_experiment(config);
    config.out_dir = dir_b;
    bench::run_experiment(config);
    for (std::uint64_t r : config.params) {
        const std::string name =
            "/repr_convergence-challenge_r" + std::to_string(r) + ".csv";
        const std::string file_a = slurp(dir_a + name);
        const std::string file_b = slurp(dir_b + name);
        CHECK(!file_a.empty());
        CHECK(file_a == file_b);
    }
}

TEST_CASE("spot and grappa methods run on the challenge app") {
    const std::string dir = "/tmp/uprop_bench_pprvg";
    std::filesystem::remove_all(dir);
    auto spot_config = tiny_config(App::ConvergenceChallenge, Method::Spot, dir);
    const auto spot_records = bench::run_experiment(spot_config);
    CHECK(spot_records.size() == 6);
    auto grappa_config = tiny_config(App::ConvergenceChallenge, Method::Grappa, dir);
    const auto grappa_records = bench::run_experiment(grappa_config);
    CHECK(grappa_records.size() == 6);
    for (const auto& rec : grappa_records) {
        CHECK(rec.wasserstein >= 0.0);
        CHECK(rec.runtime_ms >= 0.0);
    }
}

TEST_CASE("unsupported pairings are rejected") {
    const std::string dir = "/tmp/uprop_bench_unsupported";
    CHECK_THROWS_AS(
        (void)bench::run_experiment(tiny_config(App::Buffon, Method::DiracProp, dir)),
        ArgumentError);
    CHECK_THROWS_AS(
        (void)bench::run_experiment(tiny_config(App::Poiseuille, Method::Spot, dir)),
        ArgumentError);
    auto empty = tiny_config(App::Buffon, Method::MonteCarlo, dir);
    empty.params = {};
    CHECK_THROWS_AS((void)bench::run_experiment(empty), ArgumentError);
}

TEST_CASE("buffon app works through the harness") {
    const std::string dir = "/tmp/uprop_bench_buffon";
    std::filesystem::remove_all(dir);
    auto config = tiny_config(App::Buffon, Method::MonteCarlo, dir);
    const auto records = bench::run_experiment(config);
    CHECK(records.size() == 6);
    const double estimate = bench::buffon(5, 1);
    CHECK((estimate == 0.0 || estimate == 1.0));
}

TEST_CASE("report_pareto aggregates csvs into svg and table") {
    const std::string dir = "/tmp/uprop_bench_report";
    std::filesystem::remove_all(dir);
    std::string mc_csv, dirac_csv;
    bench::run_experiment(tiny_config(App::ConvergenceChallenge, Method::MonteCarlo, dir),
                          &mc_csv);
    auto dirac_config = tiny_config(App::ConvergenceChallenge, Method::DiracProp, dir);
    dirac_config.params = {16, 32};
    bench::run_experiment(dirac_config, &dirac_csv);

    const auto report = report::report_pareto({mc_csv, dirac_csv}, dir + "/report");
    REQUIRE(report.svg_paths.size() == 1);
    const std::string svg = slurp(report.svg_paths.front());
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("monte-carlo") != std::string::npos);
    CHECK(svg.find("dirac-prop") != std::string::npos);

    const std::string table = slurp(report.table_path);
    CHECK(table.find("convergence-challenge") != std::string::npos);
    CHECK(table.find("trend[monte-carlo]") != std::string::npos);
    CHECK(table.find("trend[dirac-prop]") != std::string::npos);
    CHECK(report.series.size() == 2);

    CHECK_THROWS_AS((void)report::report_pareto({}, dir), ArgumentError);
    CHECK_THROWS_AS((void)report::report_pareto({"/tmp/uprop_missing.csv"}, dir),
                    IoError);
}

TEST_CASE("single-point series produce a marker with error bars") {
    const std::string dir = "/tmp/uprop_bench_single";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::vector<metrics::RunRecord> records;
    for (int rep = 0; rep < 3; ++rep) {
        metrics::RunRecord rec;
        rec.app = "convergence-challenge";
        rec.method = "monte-carlo";
        rec.param = 1000;
        rec.repetition = rep;
        rec.wasserstein = 0.01 + 0.001 * rep;
        rec.runtime_ms = 1.0 + 0.05 * rep;
        rec.seed = rep;
        records.push_back(rec);
    }
    const std::string csv = dir + "/records.csv";
    metrics::write_records_csv(records, csv);
    const auto report = report::report_pareto({csv}, dir);
    const std::string svg = slurp(report.svg_paths.front());
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<line") != std::string::npos);
}

TEST_CASE("pushforward plots render for both apps") {
    const std::string dir = "/tmp/uprop_bench_plots";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    report::plot_pushforward(App::ConvergenceChallenge, dir + "/challenge.svg");
    report::plot_pushforward(App::Poiseuille, dir + "/poiseuille.svg");
    CHECK(slurp(dir + "/challenge.svg").find("<svg") != std::string::npos);
    CHECK(slurp(dir + "/poiseuille.svg").find("output density") != std::string::npos);
    CHECK_THROWS_AS(report::plot_pushforward(App::Buffon, dir + "/x.svg"),
                    ArgumentError);
}

TEST_CASE("pprvg_fit demo values") {
    const auto uniform_report = bench::pprvg_fit("uniform", 2, 9, 20000);
    CHECK(uniform_report.fit_residual <= 1e-8);
    CHECK(uniform_report.basis_orthonormality_error <= 1e-8);
    CHECK(uniform_report.spot_supported == false);

    const auto mixture_report = bench::pprvg_fit("mixture", 8, 9, 20000);
    CHECK(mixture_report.spot_supported == true);
    CHECK(mixture_report.spot_w1 >= 0.0);
    CHECK(mixture_report.grappa_w1 >= 0.0);

    CHECK_THROWS_AS((void)bench::pprvg_fit("cauchy", 4, 9), ArgumentError);
}

TEST_CASE("challenge output densities peak near the transformed modes") {
    // The two input modes map to sigmoid(2) ~ 0.731 and sigmoid(-1) ~ 0.119;
    // grid search the analytic output density for its local maxima.
    const AnalyticDensity out =
        pushforward_density(bench::challenge_input_mixture(), sigmoid_transform());
    const int n = 20000;
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) / n;
        values[i] = out(y);
    }
    std::vector<double> maxima;
    for (int i = 1; i + 1 < n; ++i) {
        if (values[i] > values[i - 1] && values[i] > values[i + 1]) {
            maxima.push_back((i + 0.5) / n);
        }
    }
    REQUIRE(maxima.size() == 2);
    CHECK(std::abs(maxima[0] - 0.0523904) <= 0.01);
    CHECK(std::abs(maxima[1] - 0.75506949) <= 0.01);
}
