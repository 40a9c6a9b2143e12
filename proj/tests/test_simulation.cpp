#include <doctest.h>

#include <cmath>

#include "envelope/estimation.hpp"
#include "envelope/rng.hpp"
#include "envelope/simulation.hpp"

using namespace envelope;
using namespace envelope::sim;

namespace {

constexpr double kPi = 3.14159265358979323846;

SimulationSpec spec_for(Scenario s, std::size_t n, std::uint64_t seed, double delta = 0.0) {
    SimulationSpec spec;
    spec.scenario = s;
    spec.n = n;
    spec.seed = seed;
    spec.delta = delta;
    return spec;
}

} // namespace

TEST_CASE("scenario mean surfaces") {
    double x3pi[1] = {3.0 * kPi};
    double xpi[1] = {kPi};
    CHECK(scenario_mean(Scenario::Ib, x3pi) == doctest::Approx(11.0));       // -2(cos-4.5)
    CHECK(scenario_mean(Scenario::Id, xpi) == doctest::Approx(13.75));      // -2.5(cos-4.5)
    CHECK(scenario_mean(Scenario::Ia, xpi) == doctest::Approx(11.0));
    CHECK(scenario_mean(Scenario::Ic, x3pi) == doctest::Approx(11.0));
    double x2d[2] = {kPi, kPi};
    CHECK(scenario_mean(Scenario::II, x2d) == doctest::Approx(12.375));
    double x2d_mixed[2] = {kPi, 3.0 * kPi};
    CHECK(scenario_mean(Scenario::II, x2d_mixed) ==
          doctest::Approx(std::sqrt(12.375 * 11.0)));
}

TEST_CASE("scenario names round trip") {
    for (Scenario s : {Scenario::Ia, Scenario::Ib, Scenario::Ic, Scenario::Id, Scenario::II})
        CHECK(scenario_from_string(scenario_to_string(s)) == s);
    CHECK_THROWS(scenario_from_string("bogus"));
}

TEST_CASE("generate is deterministic and respects the domain") {
    SimulationSpec spec = spec_for(Scenario::Ia, 500, 42);
    Dataset a = generate(spec);
    Dataset b = generate(spec);
    CHECK(a.y_values() == b.y_values());
    CHECK(a.x_values() == b.x_values());
    for (double x : a.x_values()) {
        REQUIRE(x >= 0.0);
        REQUIRE(x <= 6.0 * kPi);
    }
    spec.seed = 43;
    CHECK(generate(spec).y_values() != a.y_values());
}

TEST_CASE("1D mixture component sample means sit at the specified centers") {
    SimulationSpec spec = spec_for(Scenario::Ia, 3000, 7, 0.0);
    Dataset d = generate(spec);
    const double centers[3] = {kPi, 3.0 * kPi, 5.0 * kPi};
    double sum[3] = {0, 0, 0};
    std::size_t count[3] = {0, 0, 0};
    for (double x : d.x_values()) {
        int c = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(x - centers[j]) < std::abs(x - centers[c])) c = j;
        sum[c] += x;
        ++count[c];
    }
    for (int c = 0; c < 3; ++c) {
        REQUIRE(count[c] > 500);
        double se = spec.component_sd / std::sqrt(static_cast<double>(count[c]));
        CHECK(std::abs(sum[c] / count[c] - centers[c]) < 3.5 * se);
    }
}

TEST_CASE("delta moves the outer component centers inward") {
    SimulationSpec spec = spec_for(Scenario::Ia, 3000, 7, 0.3);
    Dataset d = generate(spec);
    const double centers[3] = {1.3 * kPi, 3.0 * kPi, 4.7 * kPi};
    double sum[3] = {0, 0, 0};
    std::size_t count[3] = {0, 0, 0};
    for (double x : d.x_values()) {
        int c = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(x - centers[j]) < std::abs(x - centers[c])) c = j;
        sum[c] += x;
        ++count[c];
    }
    for (int c = 0; c < 3; ++c) {
        double se = spec.component_sd / std::sqrt(static_cast<double>(count[c]));
        CHECK(std::abs(sum[c] / count[c] - centers[c]) < 3.5 * se);
    }
}

TEST_CASE("per-subregion noise levels are wired to the right subregions") {
    SimulationSpec spec = spec_for(Scenario::Ic, 6000, 13);
    Dataset d = generate(spec);
    double ss[3] = {0, 0, 0};
    std::size_t count[3] = {0, 0, 0};
    for (std::size_t i = 0; i < d.n(); ++i) {
        double x = d.row(i)[0];
        double r = d.y(i) - scenario_mean(Scenario::Ic, d.row(i));
        int sub = x < 2 * kPi ? 0 : x < 4 * kPi ? 1 : 2;
        ss[sub] += r * r;
        ++count[sub];
    }
    const double expected[3] = {0.75, 0.5, 0.05};
    for (int sub = 0; sub < 3; ++sub) {
        REQUIRE(count[sub] > 800);
        double sd = std::sqrt(ss[sub] / count[sub]);
        CHECK(sd == doctest::Approx(expected[sub]).epsilon(0.1));
    }
}

TEST_CASE("scenario II generates correlated clusters inside the domain") {
    SimulationSpec spec = spec_for(Scenario::II, 2000, 17);
    Dataset d = generate(spec);
    REQUIRE(d.p() == 2);
    const double m[4][2] = {{kPi, kPi}, {kPi, 3 * kPi}, {3 * kPi, kPi}, {3 * kPi, 3 * kPi}};
    double sx[4] = {}, sy[4] = {}, sxy[4] = {}, sxx[4] = {}, syy[4] = {};
    std::size_t cnt[4] = {};
    for (std::size_t i = 0; i < d.n(); ++i) {
        double x1 = d.row(i)[0], x2 = d.row(i)[1];
        REQUIRE(x1 >= 0.0);
        REQUIRE(x1 <= 4 * kPi);
        REQUIRE(x2 >= 0.0);
        REQUIRE(x2 <= 4 * kPi);
        int c = 0;
        double bd = 1e300;
        for (int j = 0; j < 4; ++j) {
            double dist = (x1 - m[j][0]) * (x1 - m[j][0]) + (x2 - m[j][1]) * (x2 - m[j][1]);
            if (dist < bd) {
                bd = dist;
                c = j;
            }
        }
        sx[c] += x1; sy[c] += x2; sxy[c] += x1 * x2; sxx[c] += x1 * x1; syy[c] += x2 * x2;
        ++cnt[c];
    }
    for (int c = 0; c < 4; ++c) {
        REQUIRE(cnt[c] > 300);
        double n = static_cast<double>(cnt[c]);
        double mx = sx[c] / n, my = sy[c] / n;
        double cov = sxy[c] / n - mx * my;
        double vx = sxx[c] / n - mx * mx, vy = syy[c] / n - my * my;
        CHECK(std::abs(mx - m[c][0]) < 0.25);
        CHECK(std::abs(my - m[c][1]) < 0.25);
        CHECK(cov / std::sqrt(vx * vy) > 0.4); // strong positive correlation
    }
}

TEST_CASE("spec validation") {
    SimulationSpec spec = spec_for(Scenario::Ia, 10, 1);
    spec.delta = 2.0;
    CHECK_THROWS(generate(spec));
    spec.delta = 0.0;
    spec.sigma_eps = {0.1, 0.2}; // wrong count for a 3-subregion scenario
    CHECK_THROWS(generate(spec));
    spec.sigma_eps = {-1.0};
    CHECK_THROWS(generate(spec));
}

TEST_CASE("oracle_1d anchors a monotone response at the top of the range") {
    Rng rng(23);
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        x[i] = rng.uniform(0, 1);
        y[i] = x[i];
    }
    Dataset d(std::move(y), std::move(x), {"x"});
    Oracle1DResult r = oracle_1d(d, 0.1, 0.0, {8, 1});
    CHECK(r.inside_count == 5); // ceil(0.1 * 50)
    double xmax = *std::max_element(d.x_values().begin(), d.x_values().end());
    CHECK(r.interval.upper[0] == xmax);
}

TEST_CASE("oracle_1d covers everything when beta is nearly one") {
    Rng rng(29);
    std::vector<double> x(40), y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        x[i] = rng.uniform(0, 1);
        y[i] = rng.normal(0, 1);
    }
    Dataset d(std::move(y), std::move(x), {"x"});
    Oracle1DResult r = oracle_1d(d, 0.999, 0.0, {8, 1});
    CHECK(r.inside_count == 40);
    CHECK(r.coverage == 1.0);
}

TEST_CASE("oracle_1d ties break narrow then leftmost") {
    Dataset d({5, 5, 5, 5}, {0, 1, 2, 3}, {"x"});
    Oracle1DResult r = oracle_1d(d, 0.5, 0.0, {8, 1});
    CHECK(r.interval.lower[0] == 0.0);
    CHECK(r.interval.upper[0] == 1.0);
}

TEST_CASE("oracle_1d dominates random feasible intervals") {
    Rng rng(31);
    std::vector<double> x(100), y(100);
    for (std::size_t i = 0; i < 100; ++i) {
        x[i] = rng.uniform(0, 10);
        y[i] = std::cos(x[i]) * 3.0 + rng.normal(0, 0.5);
    }
    Dataset d(std::move(y), std::move(x), {"x"});
    BootstrapConfig bs{32, 5};
    for (double gamma : {0.0, 0.5}) {
        Oracle1DResult best = oracle_1d(d, 0.25, gamma, bs);
        int feasible_checked = 0;
        Rng trial(32);
        while (feasible_checked < 1000) {
            double a = trial.uniform(0, 10), b = trial.uniform(0, 10);
            RegionUnion r{{HyperRectangle{{std::min(a, b)}, {std::max(a, b) + 1e-6}}}, 1};
            RegionEstimate est = estimate(d, r);
            if (est.coverage < 0.25 || !est.mean) continue;
            ++feasible_checked;
            double obj = *est.mean;
            if (gamma > 0.0) obj -= gamma * bootstrap_sd(d, r, bs);
            REQUIRE(best.objective >= obj - 1e-12);
        }
    }
}

TEST_CASE("oracle_1d rejects bad inputs") {
    Dataset d2({1, 2}, {0, 0, 1, 1}, {"a", "b"});
    CHECK_THROWS(oracle_1d(d2, 0.2, 0.0, {8, 1}));
    Dataset d1({1, 2}, {0, 1}, {"x"});
    CHECK_THROWS(oracle_1d(d1, 1.0, 0.0, {8, 1}));
}

TEST_CASE("separate_axes_baseline recovers the product coverage under independence") {
    Rng rng(37);
    const std::size_t n = 2000;
    std::vector<double> x(2 * n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[2 * i] = rng.uniform(0, 10);
        x[2 * i + 1] = rng.uniform(0, 10);
        y[i] = std::sin(x[2 * i]) + std::cos(x[2 * i + 1]) + rng.normal(0, 0.2);
    }
    Dataset d(std::move(y), std::move(x), {"x1", "x2"});
    double per_axis = std::sqrt(0.2);
    RegionUnion box = separate_axes_baseline(d, per_axis);
    double cov = coverage(d, box);
    CHECK(cov == doctest::Approx(0.2).epsilon(0.25));
}

TEST_CASE("monte_carlo counts sum to repetitions and are worker-independent") {
    SimulationSpec spec = spec_for(Scenario::Ia, 120, 3);
    McSolverConfig solver;
    solver.beta = 0.25;
    solver.ga.population_size = 12;
    solver.ga.max_generations = 12;
    solver.ga.stall_generations = 12;
    solver.ga.seed = 9;
    solver.penalty_schedule = {30.0};
    SubregionPartition part = SubregionPartition::default_for(Scenario::Ia);

    MonteCarloReport a = monte_carlo(spec, solver, 4, part, 1);
    MonteCarloReport b = monte_carlo(spec, solver, 4, part, 2);
    std::size_t total = 0;
    for (std::size_t c : a.cell_counts) total += c;
    CHECK(total == 4);
    CHECK(a.cell_counts == b.cell_counts);
    REQUIRE(a.per_rep.size() == b.per_rep.size());
    for (std::size_t i = 0; i < a.per_rep.size(); ++i) {
        CHECK(a.per_rep[i].cell == b.per_rep[i].cell);
        CHECK(a.per_rep[i].train_mean == b.per_rep[i].train_mean);
    }
}

TEST_CASE("subregion partition helpers") {
    CHECK_THROWS(SubregionPartition::from_boundaries({1.0}));
    CHECK_THROWS(SubregionPartition::from_boundaries({1.0, 1.0}));
    SubregionPartition p = SubregionPartition::from_boundaries({0, 1, 2});
    CHECK(p.cells.size() == 2);
    CHECK(SubregionPartition::default_for(Scenario::II).cells.size() == 4);
}
