#include <doctest.h>

#include "uprop/bench.hpp"
#include "uprop/dirac.hpp"
#include "uprop/errors.hpp"
#include "uprop/metrics.hpp"
#include "uprop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

using namespace uprop;
using dirac::Atom;
using dirac::DiracMixture;

namespace {

Dist test_mixture() {
    return Dist::gaussian_mixture({{0.6, 2.0, 0.5}, {0.4, -1.0, 1.0}});
}

bool atoms_equal(const DiracMixture& a, const DiracMixture& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.atoms().data(), b.atoms().data(), a.size() * sizeof(Atom)) == 0;
}

} // namespace

TEST_CASE("from_dist places midpoint quantiles with equal mass") {
    const DiracMixture d = dirac::from_dist(Dist::uniform(0, 1), 4);
    REQUIRE(d.size() == 4);
    const double expected[] = {0.125, 0.375, 0.625, 0.875};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(d.atoms()[i].position == doctest::Approx(expected[i]).epsilon(1e-15));
        CHECK(d.atoms()[i].mass == 0.25);
    }
    CHECK_THROWS_AS((void)dirac::from_dist(Dist::uniform(0, 1), 1), ArgumentError);
}

TEST_CASE("from_dist atom mean tracks the distribution mean") {
    // Dual route: quantile-midpoint sum vs adaptive quadrature.
    const Dist g = Dist::gaussian(3.0, 2.0);
    const DiracMixture d = dirac::from_dist(g, 64);
    const double quad_mean = expectation(g);
    CHECK(std::abs(d.mean() - quad_mean) <= 2.0 * 1e-3);
}

TEST_CASE("from_dist accuracy improves with representation size") {
    const Dist mix = test_mixture();
    Rng rng(808);
    const SampleSet gt = mc::sample_direct(rng, mix, 1000000);
    std::vector<double> sorted(gt.values);
    std::sort(sorted.begin(), sorted.end());
    const double w16 =
        metrics::wasserstein1_discrete_sorted(dirac::from_dist(mix, 16), sorted);
    const double w2048 =
        metrics::wasserstein1_discrete_sorted(dirac::from_dist(mix, 2048), sorted);
    CHECK(w2048 <= w16);
}

TEST_CASE("accuracy scaling is monotone within the sampling-noise margin") {
    const Dist dists[] = {Dist::uniform(-1, 3), Dist::gaussian(0, 1), test_mixture()};
    const std::size_t grid[] = {16, 32, 64, 128, 256, 2048};
    for (const Dist& dist : dists) {
        // Noise margin: spread of the r=2048 distance across ground truths.
        std::vector<double> floor_values;
        for (std::uint64_t k = 0; k < 3; ++k) {
            Rng rng(derive_seed(17, k, k));
            const SampleSet gt = mc::sample_direct(rng, dist, 1000000);
            std::vector<double> sorted(gt.values);
            std::sort(sorted.begin(), sorted.end());
            floor_values.push_back(metrics::wasserstein1_discrete_sorted(
                dirac::from_dist(dist, 2048), sorted));
        }
        double fmean = 0.0;
        for (double f : floor_values) fmean += f;
        fmean /= floor_values.size();
        double fvar = 0.0;
        for (double f : floor_values) fvar += (f - fmean) * (f - fmean);
        const double se = std::sqrt(fvar / (floor_values.size() - 1.0));

        Rng rng(derive_seed(17, 99, 99));
        const SampleSet gt = mc::sample_direct(rng, dist, 1000000);
        std::vector<double> sorted(gt.values);
        std::sort(sorted.begin(), sorted.end());
        double prev = 1e300;
        for (std::size_t r : grid) {
            const double w = metrics::wasserstein1_discrete_sorted(
                dirac::from_dist(dist, r), sorted);
            CHECK(w <= prev + 2.0 * se);
            prev = w;
        }
    }
}

TEST_CASE("apply_unary: affine exactness and sorting") {
    const DiracMixture d({{0.0, 0.5}, {1.0, 0.5}});
    const DiracMixture mapped = dirac::apply_unary(d, transforms::affine(2.0, 3.0));
    CHECK(mapped.atoms()[0].position == 3.0);
    CHECK(mapped.atoms()[1].position == 5.0);
    CHECK(mapped.atoms()[0].mass == 0.5);

    // Affine moment maps are exact.
    const DiracMixture g = dirac::from_dist(Dist::gaussian(0, 1), 128);
    const DiracMixture h = dirac::apply_unary(g, transforms::affine(-3.0, 7.0));
    CHECK(h.mean() == doctest::Approx(-3.0 * g.mean() + 7.0).epsilon(1e-13));
    CHECK(h.variance() == doctest::Approx(9.0 * g.variance()).epsilon(1e-12));

    // Non-monotone map re-sorts; symmetric atoms collapse onto one position.
    const DiracMixture sym({{-1.0, 0.5}, {1.0, 0.5}});
    const DiracMixture squared = dirac::apply_unary(sym, transforms::square());
    CHECK(squared.atoms()[0].position == 1.0);
    CHECK(squared.atoms()[1].position == 1.0);
    CHECK(squared.atoms()[0].mass + squared.atoms()[1].mass == 1.0);

    const DiracMixture big({{1000.0, 1.0}});
    CHECK_THROWS_AS((void)dirac::apply_unary(big, transforms::exponential()),
                    NumericError);
}

TEST_CASE("quantile equivariance of monotone maps") {
    // apply_unary after from_dist equals from_dist after the analytic
    // pushforward, atom for atom.
    const Dist mix = test_mixture();
    const Transform f = sigmoid_transform();
    const AnalyticDensity out = pushforward_density(mix, f);
    for (std::size_t r : {16, 32, 64, 128}) {
        const DiracMixture via_atoms = dirac::apply_unary(dirac::from_dist(mix, r), f);
        const DiracMixture via_density =
            dirac::from_quantiles([&out](double u) { return out.quantile(u); }, r);
        REQUIRE(via_atoms.size() == r);
        for (std::size_t i = 0; i < r; ++i) {
            CHECK(std::abs(via_atoms.atoms()[i].position -
                           via_density.atoms()[i].position) <= 1e-8);
        }
    }
}

TEST_CASE("combine: degenerate atoms and moment identities") {
    const DiracMixture two({{2.0, 1.0}});
    const DiracMixture three({{3.0, 1.0}});
    const DiracMixture five = dirac::combine(two, three, dirac::BinaryOp::Add, 1);
    REQUIRE(five.size() == 1);
    CHECK(five.atoms()[0].position == 5.0);
    CHECK(five.atoms()[0].mass == 1.0);

    const DiracMixture ga = dirac::from_dist(Dist::gaussian(0, 1), 256);
    const DiracMixture gb = dirac::from_dist(Dist::gaussian(0, 1), 256);
    const DiracMixture sum = dirac::combine(ga, gb, dirac::BinaryOp::Add, 256);
    CHECK(std::abs(sum.mean()) <= 1e-9);
    CHECK(std::abs(sum.variance() - 2.0) <= 0.05);

    const DiracMixture ua = dirac::from_dist(Dist::uniform(1, 2), 256);
    const DiracMixture ub = dirac::from_dist(Dist::uniform(1, 2), 256);
    const DiracMixture prod = dirac::combine(ua, ub, dirac::BinaryOp::Mul, 256);
    CHECK(std::abs(prod.mean() - 2.25) <= 0.01);

    const DiracMixture with_zero({{0.0, 0.5}, {1.0, 0.5}});
    CHECK_THROWS_AS((void)dirac::combine(ua, with_zero, dirac::BinaryOp::Div, 16),
                    NumericError);
}

TEST_CASE("requantize: fixed point, collapse, and mean conservation") {
    const DiracMixture already = dirac::from_dist(Dist::gaussian(1, 2), 64);
    std::vector<Atom> copy(already.atoms());
    const DiracMixture again = dirac::requantize(std::move(copy), 64);
    CHECK(atoms_equal(already, again));

    const DiracMixture pair = dirac::requantize({{0.0, 0.5}, {10.0, 0.5}}, 1);
    REQUIRE(pair.size() == 1);
    CHECK(pair.atoms()[0].position == 5.0);

    CHECK_THROWS_AS((void)dirac::requantize({}, 4), ArgumentError);

    // Pipe-flow numerator: 256 x 256 product atoms re-quantized to 64.
    const DiracMixture radius4 =
        dirac::apply_power(dirac::from_dist(Dist::uniform(0.0845, 0.0855), 256), 4);
    const DiracMixture pressure =
        dirac::from_dist(Dist::gaussian(5500000.0, 36000.0), 256);
    std::vector<Atom> product;
    product.reserve(65536);
    long double exact_mean = 0.0L;
    for (const Atom& a : radius4.atoms()) {
        for (const Atom& b : pressure.atoms()) {
            product.push_back({a.position * b.position, a.mass * b.mass});
            exact_mean += static_cast<long double>(a.position * b.position) *
                          static_cast<long double>(a.mass * b.mass);
        }
    }
    const DiracMixture reduced = dirac::requantize(std::move(product), 64);
    REQUIRE(reduced.size() == 64);
    const double expected = static_cast<double>(exact_mean);
    CHECK(std::abs(reduced.mean() - expected) <= 1e-12 * std::abs(expected));
}

TEST_CASE("requantize conserves mean on randomized transient lists") {
    Rng rng(31415);
    for (int fixture = 0; fixture < 200; ++fixture) {
        const std::size_t count = 2 + static_cast<std::size_t>(rng.next_double() * 400);
        std::vector<Atom> atoms;
        atoms.reserve(count);
        std::vector<double> raw(count);
        double total = 0.0;
        for (auto& w : raw) {
            w = rng.next_double() + 1e-3;
            total += w;
        }
        long double exact_mean = 0.0L;
        for (std::size_t i = 0; i < count; ++i) {
            const double pos = rng.next_double() * 200.0 - 100.0;
            const double mass = raw[i] / total;
            atoms.push_back({pos, mass});
            exact_mean += static_cast<long double>(pos) * static_cast<long double>(mass);
        }
        const std::size_t r = 1 + static_cast<std::size_t>(rng.next_double() * 64);
        const DiracMixture reduced = dirac::requantize(std::move(atoms), r);
        const double expected = static_cast<double>(exact_mean);
        CHECK(std::abs(reduced.mean() - expected) <=
              1e-12 * (1.0 + std::abs(expected)));
    }
}

TEST_CASE("degenerate all-equal positions collapse cleanly") {
    std::vector<Atom> same(100, Atom{3.25, 0.01});
    const DiracMixture d = dirac::requantize(std::move(same), 8);
    REQUIRE(d.size() == 8);
    for (const Atom& atom : d.atoms()) {
        CHECK(atom.position == 3.25);
    }
}

TEST_CASE("moments and sample_repr") {
    const DiracMixture d({{1.0, 0.5}, {3.0, 0.5}});
    const auto stats = dirac::moments(d);
    CHECK(stats.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(stats.variance == doctest::Approx(1.0).epsilon(1e-15));

    const DiracMixture point({{7.0, 1.0}});
    Rng rng(6);
    const SampleSet fixed = dirac::sample_repr(point, rng, 1000);
    for (double v : fixed.values) {
        CHECK(v == 7.0);
    }

    const DiracMixture g = dirac::from_dist(Dist::gaussian(0, 1), 2048);
    Rng rng2(7);
    const SampleSet drawn = dirac::sample_repr(g, rng2, 1000000);
    const auto sample_stats = summarize_samples(drawn);
    CHECK(std::abs(sample_stats.mean) <= 0.004);
}

TEST_CASE("eval_expr: identity, structural identity, determinism") {
    const Dist mix = test_mixture();
    std::map<std::string, DiracMixture> inputs;
    inputs.emplace("x", dirac::from_dist(mix, 64));

    const DiracMixture same = dirac::eval_expr(Expr::input("x"), inputs, 64);
    CHECK(atoms_equal(same, inputs.at("x")));

    // Challenge expression is one unary node: eval equals apply_unary.
    const Expr challenge = Expr::apply(Expr::input("x"), sigmoid_transform());
    const DiracMixture via_eval = dirac::eval_expr(challenge, inputs, 64);
    const DiracMixture via_apply =
        dirac::apply_unary(inputs.at("x"), sigmoid_transform());
    CHECK(atoms_equal(via_eval, via_apply));

    const DiracMixture repeat = dirac::eval_expr(challenge, inputs, 64);
    CHECK(atoms_equal(via_eval, repeat));

    CHECK_THROWS_AS((void)dirac::eval_expr(Expr::input("y"), inputs, 64), ArgumentError);
}

TEST_CASE("eval_expr: pipe-flow expression against a Monte Carlo oracle") {
    const auto spec = bench::make_app_spec(bench::App::Poiseuille);
    std::map<std::string, DiracMixture> inputs;
    for (const auto& [name, dist] : spec.inputs) {
        inputs.emplace(name, dirac::from_dist(dist, 32));
    }
    std::vector<std::string> warnings;
    const DiracMixture q = dirac::eval_expr(spec.expr, inputs, 32, &warnings);
    CHECK(warnings.empty());

    Rng rng(2718);
    std::vector<std::pair<std::string, SampleSet>> mc_inputs;
    for (const auto& [name, dist] : spec.inputs) {
        mc_inputs.emplace_back(name, mc::sample_direct(rng, dist, 1000000));
    }
    std::vector<std::pair<std::string, const SampleSet*>> views;
    for (auto& [name, set] : mc_inputs) views.emplace_back(name, &set);
    const auto oracle = summarize_samples(mc::evaluate_multi(views, spec.expr));
    CHECK(std::abs(q.mean() - oracle.mean) <= 0.02);
}

TEST_CASE("eval_expr: repeated input reference warns") {
    std::map<std::string, DiracMixture> inputs;
    inputs.emplace("x", dirac::from_dist(Dist::uniform(1, 2), 16));
    const Expr doubled = Expr::mul(Expr::input("x"), Expr::input("x"));
    std::vector<std::string> warnings;
    (void)dirac::eval_expr(doubled, inputs, 16, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("'x'") != std::string::npos);
}

TEST_CASE("eval_expr: division guards") {
    std::map<std::string, DiracMixture> inputs;
    inputs.emplace("num", dirac::from_dist(Dist::uniform(1, 2), 16));
    inputs.emplace("den", dirac::from_dist(Dist::uniform(-1, 1), 16));
    const Expr ratio = Expr::div(Expr::input("num"), Expr::input("den"));
    CHECK_THROWS_AS((void)dirac::eval_expr(ratio, inputs, 16), NumericError);

    // The error message names the failing node path.
    try {
        (void)dirac::eval_expr(ratio, inputs, 16);
        FAIL("expected NumericError");
    } catch (const NumericError& err) {
        CHECK(std::string(err.what()).find("div") != std::string::npos);
    }
}

TEST_CASE("dirac csv round trip") {
    const DiracMixture d = dirac::from_dist(test_mixture(), 32);
    const std::string path = "/tmp/uprop_test_dirac.csv";
    dirac::write_dirac_csv(d, path);
    const DiracMixture back = dirac::read_dirac_csv(path);
    CHECK(atoms_equal(d, back));
}

TEST_CASE("dirac mixture validation") {
    CHECK_THROWS_AS(DiracMixture({}), ArgumentError);
    CHECK_THROWS_AS(DiracMixture({{0.0, 0.5}, {1.0, 0.6}}), ArgumentError);
    CHECK_THROWS_AS(DiracMixture({{1.0, 0.5}, {0.0, 0.5}}), ArgumentError);
    CHECK_THROWS_AS(DiracMixture({{0.0, -0.5}, {1.0, 1.5}}), ArgumentError);
}
