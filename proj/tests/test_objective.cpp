#include <doctest.h>

#include <cmath>

#include "envelope/dataset.hpp"
#include "envelope/objective.hpp"
#include "envelope/rng.hpp"

using namespace envelope;

namespace {

Dataset dataset_1d(std::vector<double> y, std::vector<double> x) {
    return Dataset(std::move(y), std::move(x), {"x"});
}

Dataset grid_dataset(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform(0, 10);
        y[i] = std::sin(x[i]) + rng.normal(0, 0.3);
    }
    return dataset_1d(std::move(y), std::move(x));
}

} // namespace

TEST_CASE("default_eta sits strictly below min(y) with a range margin") {
    CHECK(default_eta(dataset_1d({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                                 {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10})) == -11.0);
    CHECK(default_eta(dataset_1d({5}, {0})) == 4.0);
    CHECK(default_eta(dataset_1d({-3, -1}, {0, 1})) == -6.0);
}

TEST_CASE("sentinel_objective branches") {
    Dataset d = dataset_1d({1, 2, 3}, {0.1, 0.5, 0.9});
    ObjectiveConfig cfg;
    double eta = default_eta(d);

    // overlapping two-box encoding fails the disjointness test
    CHECK(sentinel_objective(d, {0.0, 1.0, 0.5, 2.0}, cfg, 2).fitness == eta);
    CHECK(sentinel_objective(d, {0.0, 1.0, 0.5, 2.0}, cfg, 2).sentinel);

    FitnessBreakdown ok = sentinel_objective(d, {0.0, 1.0}, cfg, 1);
    CHECK_FALSE(ok.sentinel);
    CHECK(ok.fitness == doctest::Approx(2.0));

    // valid box but no samples inside
    CHECK(sentinel_objective(d, {2.0, 3.0}, cfg, 1).fitness == eta);
}

TEST_CASE("penalized_fitness hinge arithmetic") {
    // ten points, half inside [0, 0.5]
    Dataset d = dataset_1d({3, 3, 3, 3, 3, 0, 0, 0, 0, 0},
                           {0.1, 0.2, 0.3, 0.4, 0.45, 0.6, 0.7, 0.8, 0.9, 0.95});
    ObjectiveConfig cfg;
    cfg.gamma = 0.0;

    SUBCASE("inactive hinge") {
        cfg.beta = 0.2;
        cfg.penalty_weight = 10.0;
        FitnessBreakdown fb = penalized_fitness(d, {0.0, 0.5}, cfg, 1);
        CHECK(fb.fitness == doctest::Approx(3.0));
        CHECK(fb.penalty_term == 0.0);
        CHECK(fb.coverage == doctest::Approx(0.5));
    }
    SUBCASE("active hinge") {
        cfg.beta = 0.7;
        cfg.penalty_weight = 10.0;
        // coverage 0.5 -> violation 0.2 -> penalty 2.0
        FitnessBreakdown fb = penalized_fitness(d, {0.0, 0.5}, cfg, 1);
        CHECK(fb.fitness == doctest::Approx(1.0));
        CHECK(fb.penalty_term == doctest::Approx(2.0));
    }
    SUBCASE("zero penalty exactly at the floor") {
        cfg.beta = 0.5;
        cfg.penalty_weight = 100.0;
        FitnessBreakdown fb = penalized_fitness(d, {0.0, 0.5}, cfg, 1);
        CHECK(fb.penalty_term == 0.0);
        CHECK(fb.fitness == doctest::Approx(3.0));
    }
}

TEST_CASE("breakdown identity holds on random candidates") {
    Dataset d = grid_dataset(150, 61);
    ObjectiveConfig cfg;
    cfg.beta = 0.4;
    cfg.penalty_weight = 5.0;
    cfg.gamma = 1.5;
    cfg.bootstrap = {64, 99};
    FitnessEvaluator ev(d, cfg, 1);
    Rng rng(62);
    for (int t = 0; t < 30; ++t) {
        ParamVector v{rng.uniform(0, 10), rng.uniform(0, 10)};
        FitnessBreakdown fb = ev.evaluate(v);
        if (fb.sentinel) {
            REQUIRE(fb.fitness == ev.eta());
        } else {
            REQUIRE(fb.fitness ==
                    doctest::Approx(*fb.raw_mean - cfg.gamma * fb.sd - fb.penalty_term)
                        .epsilon(1e-12));
        }
    }
}

TEST_CASE("sentinel fitness is strictly below any feasible fitness at gamma 0") {
    Dataset d = grid_dataset(100, 71);
    ObjectiveConfig cfg;
    cfg.beta = 0.2;
    cfg.penalty_weight = 3.0;
    FitnessEvaluator ev(d, cfg, 1);
    FitnessBreakdown sentinel = ev.evaluate({5.0, 5.0}); // zero width -> invalid
    REQUIRE(sentinel.sentinel);
    Rng rng(72);
    for (int t = 0; t < 40; ++t) {
        double a = rng.uniform(0, 10), b = rng.uniform(0, 10);
        FitnessBreakdown fb = ev.evaluate({std::min(a, b), std::max(a, b) + 0.5});
        if (!fb.sentinel && fb.penalty_term == 0.0) REQUIRE(fb.fitness > sentinel.fitness);
    }
}

TEST_CASE("fitness of a violating candidate strictly decreases in c") {
    Dataset d = grid_dataset(120, 81);
    ParamVector tight{4.0, 4.4};   // small coverage, violates beta
    ParamVector wide{0.0, 10.0};   // full coverage
    double last_tight = 1e300;
    double wide_fitness = 0.0;
    for (double c : {1.0, 10.0, 100.0}) {
        ObjectiveConfig cfg;
        cfg.beta = 0.6;
        cfg.penalty_weight = c;
        FitnessEvaluator ev(d, cfg, 1);
        double ft = ev.fitness(tight);
        CHECK(ft < last_tight);
        last_tight = ft;
        // a satisfied candidate's fitness is c-independent
        FitnessBreakdown wb = ev.evaluate(wide);
        CHECK(wb.penalty_term == 0.0);
        if (c == 1.0)
            wide_fitness = wb.fitness;
        else
            CHECK(wb.fitness == wide_fitness);
    }
}

TEST_CASE("gamma 0 skips the bootstrap and fitness equals the plain mean") {
    Dataset d = grid_dataset(90, 91);
    ObjectiveConfig cfg;
    cfg.beta = 0.1;
    cfg.penalty_weight = 2.0;
    cfg.gamma = 0.0;
    FitnessEvaluator ev(d, cfg, 1);
    FitnessBreakdown fb = ev.evaluate({0.0, 10.5});
    CHECK(fb.sd == 0.0);
    auto mean = saa_mean(d, RegionUnion{{HyperRectangle{{0.0}, {10.5}}}, 1});
    CHECK(fb.fitness == *mean);
}

TEST_CASE("repeated evaluation of one candidate is stable under both seedings") {
    Dataset d = grid_dataset(100, 95);
    for (BootstrapSeeding seeding :
         {BootstrapSeeding::per_candidate, BootstrapSeeding::shared}) {
        ObjectiveConfig cfg;
        cfg.beta = 0.2;
        cfg.penalty_weight = 2.0;
        cfg.gamma = 2.0;
        cfg.bootstrap = {64, 7};
        cfg.seeding = seeding;
        FitnessEvaluator ev(d, cfg, 1);
        ParamVector v{1.0, 9.0};
        double first = ev.fitness(v);
        for (int i = 0; i < 5; ++i) REQUIRE(ev.fitness(v) == first);
        // a fresh evaluator reproduces the value too
        FitnessEvaluator ev2(d, cfg, 1);
        REQUIRE(ev2.fitness(v) == first);
    }
}

TEST_CASE("shared seeding reproduces bootstrap_sd exactly") {
    Dataset d = grid_dataset(100, 96);
    ObjectiveConfig cfg;
    cfg.beta = 0.0;
    cfg.penalty_weight = 1.0;
    cfg.gamma = 1.0;
    cfg.bootstrap = {64, 11};
    cfg.seeding = BootstrapSeeding::shared;
    FitnessEvaluator ev(d, cfg, 1);
    ParamVector v{2.0, 8.0};
    FitnessBreakdown fb = ev.evaluate(v);
    RegionUnion r = *decode(v, 1, 1);
    CHECK(fb.sd == bootstrap_sd(d, r, cfg.bootstrap));
}

TEST_CASE("config validation") {
    Dataset d = grid_dataset(50, 97);
    ObjectiveConfig cfg;
    cfg.beta = 1.0;
    CHECK_THROWS(FitnessEvaluator(d, cfg, 1));
    cfg.beta = 0.2;
    cfg.penalty_weight = 0.0;
    CHECK_THROWS(FitnessEvaluator(d, cfg, 1));
    cfg.penalty_weight = 1.0;
    cfg.eta = 100.0; // not below min(y)
    CHECK_THROWS(FitnessEvaluator(d, cfg, 1));
}
