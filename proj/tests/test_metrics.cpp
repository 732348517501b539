#include <doctest.h>

#include "uprop/bench.hpp"
#include "uprop/dirac.hpp"
#include "uprop/errors.hpp"
#include "uprop/metrics.hpp"
#include "uprop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace uprop;

namespace {

Dist test_mixture() {
    return Dist::gaussian_mixture({{0.6, 2.0, 0.5}, {0.4, -1.0, 1.0}});
}

SampleSet make_set(std::vector<double> values) {
    SampleSet set;
    set.values = std::move(values);
    set.provenance = {"test", 0, "fixture"};
    return set;
}

// Oracle: for equal sizes W1 is the mean absolute difference of sorted
// samples.
double sorted_difference_oracle(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return sum / static_cast<double>(a.size());
}

std::vector<double> random_values(Rng& rng, std::size_t n, double scale) {
    std::vector<double> out(n);
    for (auto& v : out) {
        v = (rng.next_double() - 0.5) * scale;
    }
    return out;
}

} // namespace

TEST_CASE("wasserstein1 basic values") {
    const SampleSet a = make_set({1.0, 2.0, 3.0});
    CHECK(metrics::wasserstein1(a, a).distance == 0.0);

    const SampleSet zero = make_set({0.0});
    const SampleSet one = make_set({1.0});
    CHECK(metrics::wasserstein1(zero, one).distance == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)metrics::wasserstein1(make_set({}), one), ArgumentError);
}

TEST_CASE("wasserstein1 of a unit translation at one million draws") {
    Rng ra(100);
    Rng rb(200);
    const SampleSet a = mc::sample_gaussian(ra, 0.0, 1.0, 1000000);
    const SampleSet b = mc::sample_gaussian(rb, 1.0, 1.0, 1000000);
    const auto result = metrics::wasserstein1(a, b);
    CHECK(std::abs(result.distance - 1.0) <= 0.01);
    CHECK(result.n_left == 1000000);
    CHECK(result.method == metrics::W1Method::EmpiricalEmpirical);
}

TEST_CASE("wasserstein1 equals the sorted-difference oracle at equal sizes") {
    Rng rng(555);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.next_double() * 999);
        const auto a = random_values(rng, n, 20.0);
        const auto b = random_values(rng, n, 20.0);
        const double breakpoints = metrics::wasserstein1(a, b).distance;
        const double oracle = sorted_difference_oracle(a, b);
        CHECK(std::abs(breakpoints - oracle) <= 1e-12);
    }
}

TEST_CASE("wasserstein1 metric properties") {
    Rng rng(556);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.next_double() * 99);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.next_double() * 99);
        const auto a = random_values(rng, n, 10.0);
        const auto b = random_values(rng, m, 10.0);

        // Symmetry is exact.
        CHECK(metrics::wasserstein1(a, b).distance ==
              metrics::wasserstein1(b, a).distance);

        // Translation by c moves W1 of a set against itself-shifted to |c|.
        const double c = (rng.next_double() - 0.5) * 8.0;
        std::vector<double> shifted(a);
        for (auto& v : shifted) v += c;
        CHECK(std::abs(metrics::wasserstein1(a, shifted).distance - std::abs(c)) <=
              1e-12);

        // Scale covariance.
        const double k = (rng.next_double() - 0.5) * 6.0;
        std::vector<double> ka(a), kb(b);
        for (auto& v : ka) v *= k;
        for (auto& v : kb) v *= k;
        const double base = metrics::wasserstein1(a, b).distance;
        CHECK(std::abs(metrics::wasserstein1(ka, kb).distance - std::abs(k) * base) <=
              1e-12 * (1.0 + std::abs(k) * base));
    }

    // Triangle inequality on random triples.
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_values(rng, 60, 10.0);
        const auto b = random_values(rng, 35, 10.0);
        const auto c = random_values(rng, 80, 10.0);
        const double ac = metrics::wasserstein1(a, c).distance;
        const double ab = metrics::wasserstein1(a, b).distance;
        const double bc = metrics::wasserstein1(b, c).distance;
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("wasserstein1_discrete basics") {
    const dirac::DiracMixture point({{2.5, 1.0}});
    CHECK(metrics::wasserstein1_discrete(point, make_set({2.5})).distance == 0.0);

    // Atoms replayed as equally-weighted samples give identical CDFs.
    const dirac::DiracMixture d = dirac::from_dist(Dist::uniform(0, 1), 16);
    std::vector<double> positions;
    for (const auto& atom : d.atoms()) positions.push_back(atom.position);
    CHECK(metrics::wasserstein1_discrete(d, make_set(positions)).distance == 0.0);

    CHECK_THROWS_AS((void)metrics::wasserstein1_discrete(point, make_set({})),
                    ArgumentError);
}

TEST_CASE("discrete route agrees with the sampled route") {
    const Dist mix = test_mixture();
    const dirac::DiracMixture d = dirac::from_dist(mix, 16);
    Rng gt_rng(777);
    const SampleSet gt = mc::sample_direct(gt_rng, mix, 1000000);
    std::vector<double> sorted_gt(gt.values);
    std::sort(sorted_gt.begin(), sorted_gt.end());

    const double direct = metrics::wasserstein1_discrete_sorted(d, sorted_gt);

    std::vector<double> sampled;
    for (std::uint32_t rep = 0; rep < 30; ++rep) {
        Rng rng(derive_seed(9000, 0, rep));
        const SampleSet drawn = dirac::sample_repr(d, rng, 1000000);
        std::vector<double> sorted(drawn.values);
        std::sort(sorted.begin(), sorted.end());
        sampled.push_back(metrics::wasserstein1_sorted(sorted, sorted_gt));
    }
    double mean = 0.0;
    for (double w : sampled) mean += w;
    mean /= sampled.size();
    double var = 0.0;
    for (double w : sampled) var += (w - mean) * (w - mean);
    const double se = std::sqrt(var / (sampled.size() - 1.0)) / std::sqrt(30.0);
    CHECK(std::abs(direct - mean) <= 3.0 * se + 1e-4);
}

TEST_CASE("timer spans") {
    const auto empty = metrics::time_block([] {});
    CHECK(empty.elapsed_ms() >= 0.0);
    CHECK(empty.elapsed_ms() < 1.0);

    auto busy = [](std::size_t iterations) {
        volatile double sink = 0.0;
        for (std::size_t i = 0; i < iterations; ++i) {
            sink = sink + std::sqrt(static_cast<double>(i));
        }
        (void)sink;
    };
    constexpr std::size_t kIters = 12000000;
    const auto first = metrics::time_block([&] { busy(kIters); });
    const auto second = metrics::time_block([&] { busy(kIters); });
    const double ratio = first.elapsed_ms() / second.elapsed_ms();
    CHECK(ratio < 3.0);
    CHECK(ratio > 1.0 / 3.0);

    metrics::TimerSpan inner1{}, inner2{};
    const auto outer = metrics::time_block([&] {
        inner1 = metrics::time_block([&] { busy(kIters); });
        inner2 = metrics::time_block([&] { busy(kIters); });
    });
    const double inner_sum = inner1.elapsed_ms() + inner2.elapsed_ms();
    CHECK(std::abs(outer.elapsed_ms() - inner_sum) <= 0.05 * outer.elapsed_ms());
}

TEST_CASE("summarize run records") {
    std::vector<metrics::RunRecord> same(5);
    for (auto& rec : same) {
        rec.wasserstein = 0.25;
        rec.runtime_ms = 3.0;
    }
    const auto flat = metrics::summarize(same);
    CHECK(flat.w1_std == 0.0);
    CHECK(flat.time_std == 0.0);
    CHECK(flat.w1_mean == doctest::Approx(0.25));

    std::vector<metrics::RunRecord> two(2);
    two[0].wasserstein = 1.0;
    two[1].wasserstein = 3.0;
    const auto pair = metrics::summarize(two);
    CHECK(pair.w1_mean == doctest::Approx(2.0));
    CHECK(pair.w1_std == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS((void)metrics::summarize({two[0]}), ArgumentError);

    // 30 synthetic records from a known Gaussian: mean within 3 sigma/sqrt(30).
    Rng rng(14);
    const SampleSet draws = mc::sample_gaussian(rng, 5.0, 0.5, 30);
    std::vector<metrics::RunRecord> synthetic(30);
    for (std::size_t i = 0; i < 30; ++i) {
        synthetic[i].wasserstein = draws.values[i];
    }
    const auto stats = metrics::summarize(synthetic);
    CHECK(std::abs(stats.w1_mean - 5.0) <= 3.0 * 0.5 / std::sqrt(30.0));
}

TEST_CASE("records csv round trip and schema enforcement") {
    std::vector<metrics::RunRecord> records;
    for (int i = 0; i < 4; ++i) {
        metrics::RunRecord rec;
        rec.app = "convergence-challenge";
        rec.method = "monte-carlo";
        rec.param = 1000 * (i + 1);
        rec.repetition = i;
        rec.wasserstein = 0.001 * (i + 1);
        rec.runtime_ms = 1.5 * (i + 1);
        rec.seed = 42 + i;
        records.push_back(rec);
    }
    const std::string path = "/tmp/uprop_test_records.csv";
    metrics::write_records_csv(records, path);
    const auto back = metrics::read_records_csv(path);
    REQUIRE(back.size() == records.size());
    CHECK(back[2].param == records[2].param);
    CHECK(back[2].wasserstein == doctest::Approx(records[2].wasserstein));
    CHECK(back[3].seed == records[3].seed);

    std::ofstream bad("/tmp/uprop_bad_records.csv");
    bad << "app,method,param\n1,2,3\n";
    bad.close();
    CHECK_THROWS_AS((void)metrics::read_records_csv("/tmp/uprop_bad_records.csv"),
                    ArgumentError);
}

TEST_CASE("ground truth cache: determinism, corruption recovery, mean checks") {
    const std::string dir = "/tmp/uprop_gt_cache_test";
    std::filesystem::remove_all(dir);

    const SampleSet first =
        bench::ground_truth(bench::App::ConvergenceChallenge, 4321, 200000, dir);
    metrics::GroundTruthCache cache(dir);
    const std::string path = cache.path_for("convergence-challenge", 4321, 200000);
    const std::uint64_t checksum_a = metrics::fnv1a64_file(path);

    const SampleSet second =
        bench::ground_truth(bench::App::ConvergenceChallenge, 4321, 200000, dir);
    CHECK(metrics::fnv1a64_file(path) == checksum_a);
    REQUIRE(first.size() == second.size());
    CHECK(first.values == second.values);

    // Corrupt the cached file: the next call must regenerate, not trust it.
    {
        std::ofstream trash(path);
        trash << "# garbage\nnot-a-number\n";
    }
    const SampleSet third =
        bench::ground_truth(bench::App::ConvergenceChallenge, 4321, 200000, dir);
    CHECK(third.values == first.values);
    CHECK(metrics::fnv1a64_file(path) == checksum_a);

    // Output mean against the quadrature of the analytic output density.
    const AnalyticDensity out_density =
        pushforward_density(test_mixture(), sigmoid_transform());
    const double expected_mean =
        integrate([&out_density](double y) { return y * out_density(y); }, 1e-12,
                  1.0 - 1e-12, {1e-10, 20000})
            .value;
    const double expected_sq =
        integrate([&out_density](double y) { return y * y * out_density(y); }, 1e-12,
                  1.0 - 1e-12, {1e-10, 20000})
            .value;
    const double sigma = std::sqrt(expected_sq - expected_mean * expected_mean);
    const auto stats = summarize_samples(first);
    CHECK(std::abs(stats.mean - expected_mean) <=
          3.0 * sigma / std::sqrt(static_cast<double>(first.size())));
}

TEST_CASE("poiseuille ground truth mean against the closed form") {
    // E[Q] factors over independent inputs: (pi/8) E[r^4] E[dP] E[1/mu] E[1/l].
    // Uniform moments are elementary; the value below is exact to 17 digits.
    const double exact_mean = 4.0281721830131010;
    const double exact_sigma = 0.094011199804443325;

    const std::string dir = "/tmp/uprop_gt_cache_poiseuille";
    std::filesystem::remove_all(dir);
    const SampleSet gt_a = bench::ground_truth(bench::App::Poiseuille, 1, 400000, dir);
    const auto stats_a = summarize_samples(gt_a);
    const double se = exact_sigma / std::sqrt(static_cast<double>(gt_a.size()));
    CHECK(std::abs(stats_a.mean - exact_mean) <= 3.0 * se);

    // Independent re-run with a different seed as the oracle.
    const SampleSet gt_b = bench::ground_truth(bench::App::Poiseuille, 2, 400000, dir);
    const auto stats_b = summarize_samples(gt_b);
    CHECK(std::abs(stats_a.mean - stats_b.mean) <= 3.0 * se * std::sqrt(2.0));
}
