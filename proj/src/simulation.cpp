#include "envelope/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "envelope/parallel.hpp"
#include "envelope/rng.hpp"

namespace envelope::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

constexpr std::uint64_t kMcSalt = 0x6D63ULL;

double cos_curve(double coef, double x) { return -coef * (std::cos(x) - 4.5); }

// f0 for scenario II: the left branch on [0, 2*pi], the right on (2*pi, 4*pi].
double f0(double z) {
    return z <= kTwoPi ? cos_curve(2.25, z) : cos_curve(2.0, z);
}

int subregion_1d(double x) {
    if (x < kTwoPi) return 0;
    if (x < 2.0 * kTwoPi) return 1;
    return 2;
}

// Scenario II quadrants in reading order of a 2x2 plot: S1 top-left,
// S2 top-right, S3 bottom-left, S4 bottom-right, split at 2*pi on each axis.
int subregion_2d(double x1, double x2) {
    bool left = x1 <= kTwoPi;
    bool bottom = x2 <= kTwoPi;
    if (left && !bottom) return 0;
    if (!left && !bottom) return 1;
    if (left && bottom) return 2;
    return 3;
}

std::vector<double> default_sigma(Scenario s) {
    switch (s) {
        case Scenario::Ia:
        case Scenario::Ib:
            return {0.25};
        case Scenario::Ic:
        case Scenario::Id:
            return {0.75, 0.5, 0.05};
        case Scenario::II:
            return {0.11, 0.15, 0.05, 0.5};
    }
    return {0.25};
}

std::size_t subregion_count(Scenario s) { return s == Scenario::II ? 4 : 3; }

} // namespace

Scenario scenario_from_string(const std::string& name) {
    if (name == "I-a" || name == "Ia") return Scenario::Ia;
    if (name == "I-b" || name == "Ib") return Scenario::Ib;
    if (name == "I-c" || name == "Ic") return Scenario::Ic;
    if (name == "I-d" || name == "Id") return Scenario::Id;
    if (name == "II") return Scenario::II;
    throw std::invalid_argument("unknown scenario '" + name +
                                "' (expected I-a, I-b, I-c, I-d, or II)");
}

std::string scenario_to_string(Scenario s) {
    switch (s) {
        case Scenario::Ia: return "I-a";
        case Scenario::Ib: return "I-b";
        case Scenario::Ic: return "I-c";
        case Scenario::Id: return "I-d";
        case Scenario::II: return "II";
    }
    return "?";
}

void SimulationSpec::validate() const {
    if (n < 1) throw std::invalid_argument("SimulationSpec: n must be >= 1");
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("SimulationSpec: delta must be in [0,1]");
    if (!(component_sd > 0.0))
        throw std::invalid_argument("SimulationSpec: component_sd must be positive");
    if (!(cov_scale > 0.0))
        throw std::invalid_argument("SimulationSpec: cov_scale must be positive");
    if (!sigma_eps.empty() && sigma_eps.size() != 1 &&
        sigma_eps.size() != subregion_count(scenario))
        throw std::invalid_argument(
            "SimulationSpec: sigma_eps must be empty, one value, or one per subregion");
    for (double s : sigma_eps)
        if (!(s > 0.0)) throw std::invalid_argument("SimulationSpec: sigma values must be positive");
}

double scenario_mean(Scenario s, std::span<const double> x) {
    switch (s) {
        case Scenario::Ia:
            return cos_curve(2.0, x[0]);
        case Scenario::Ib:
            switch (subregion_1d(x[0])) {
                case 0: return cos_curve(1.95, x[0]);
                case 1: return cos_curve(2.0, x[0]);
                default: return cos_curve(1.9, x[0]);
            }
        case Scenario::Ic:
            return cos_curve(2.0, x[0]);
        case Scenario::Id:
            switch (subregion_1d(x[0])) {
                case 0: return cos_curve(2.5, x[0]);
                case 1: return cos_curve(2.25, x[0]);
                default: return cos_curve(2.0, x[0]);
            }
        case Scenario::II:
            return std::sqrt(f0(x[0]) * f0(x[1]));
    }
    return 0.0;
}

double scenario_noise_sd(const SimulationSpec& spec, std::span<const double> x) {
    std::vector<double> sigma = spec.sigma_eps.empty() ? default_sigma(spec.scenario)
                                                       : spec.sigma_eps;
    if (sigma.size() == 1) return sigma[0];
    int sub = spec.scenario == Scenario::II ? subregion_2d(x[0], x[1])
                                            : subregion_1d(x[0]);
    return sigma[static_cast<std::size_t>(sub)];
}

Dataset generate(const SimulationSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    std::vector<double> y;
    std::vector<double> x;
    y.reserve(spec.n);

    if (spec.scenario == Scenario::II) {
        x.reserve(spec.n * 2);
        const double means[4][2] = {{kPi, kPi}, {kPi, 3.0 * kPi}, {3.0 * kPi, kPi},
                                    {3.0 * kPi, 3.0 * kPi}};
        // Cholesky factor of cov_scale^2 * [[1.2, 1], [1, 1.2]].
        double a = spec.cov_scale * std::sqrt(1.2);
        double b = spec.cov_scale * (1.0 / std::sqrt(1.2));
        double c = spec.cov_scale * std::sqrt(1.2 - 1.0 / 1.2);
        const double hi = 2.0 * kTwoPi;
        for (std::size_t i = 0; i < spec.n; ++i) {
            double x1, x2;
            do {
                std::size_t comp = rng.uniform_index(4);
                double z1 = rng.normal();
                double z2 = rng.normal();
                x1 = means[comp][0] + a * z1;
                x2 = means[comp][1] + b * z1 + c * z2;
            } while (x1 < 0.0 || x1 > hi || x2 < 0.0 || x2 > hi);
            double pt[2] = {x1, x2};
            double f = scenario_mean(spec.scenario, pt);
            double eps = rng.normal(0.0, scenario_noise_sd(spec, pt));
            x.push_back(x1);
            x.push_back(x2);
            y.push_back(f + eps);
        }
        return Dataset(std::move(y), std::move(x), {"x1", "x2"});
    }

    x.reserve(spec.n);
    const double means[3] = {(1.0 + spec.delta) * kPi, 3.0 * kPi,
                             (5.0 - spec.delta) * kPi};
    const double hi = 3.0 * kTwoPi;
    for (std::size_t i = 0; i < spec.n; ++i) {
        double xv;
        do {
            std::size_t comp = rng.uniform_index(3);
            xv = rng.normal(means[comp], spec.component_sd);
        } while (xv < 0.0 || xv > hi);
        double pt[1] = {xv};
        double f = scenario_mean(spec.scenario, pt);
        double eps = rng.normal(0.0, scenario_noise_sd(spec, pt));
        x.push_back(xv);
        y.push_back(f + eps);
    }
    return Dataset(std::move(y), std::move(x), {"x1"});
}

SubregionPartition SubregionPartition::from_boundaries(const std::vector<double>& bs) {
    if (bs.size() < 2)
        throw std::invalid_argument("SubregionPartition: need at least two boundaries");
    SubregionPartition part;
    for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
        if (!(bs[i] < bs[i + 1]))
            throw std::invalid_argument("SubregionPartition: boundaries must increase");
        part.cells.push_back(HyperRectangle{{bs[i]}, {bs[i + 1]}});
    }
    return part;
}

SubregionPartition SubregionPartition::default_for(Scenario s) {
    if (s == Scenario::II) {
        SubregionPartition part;
        const double b = kTwoPi;
        const double hi = 2.0 * kTwoPi;
        part.cells.push_back(HyperRectangle{{0.0, b}, {b, hi}});  // top-left
        part.cells.push_back(HyperRectangle{{b, b}, {hi, hi}});   // top-right
        part.cells.push_back(HyperRectangle{{0.0, 0.0}, {b, b}}); // bottom-left
        part.cells.push_back(HyperRectangle{{b, 0.0}, {hi, b}});  // bottom-right
        return part;
    }
    return from_boundaries({0.0, kTwoPi, 2.0 * kTwoPi, 3.0 * kTwoPi});
}

namespace {

int classify_region(const RegionUnion& region, const SubregionPartition& part) {
    if (region.boxes.empty() || part.cells.empty()) return -1;
    std::size_t p = region.p;
    // Volume-weighted centroid of the union.
    std::vector<double> centroid(p, 0.0);
    double total = 0.0;
    for (const auto& box : region.boxes) {
        double vol = 1.0;
        for (std::size_t j = 0; j < p; ++j) vol *= box.width(j);
        std::vector<double> c = box.center();
        for (std::size_t j = 0; j < p; ++j) centroid[j] += vol * c[j];
        total += vol;
    }
    if (total <= 0.0) return -1;
    for (double& v : centroid) v /= total;
    // Clamp into the partition hull so slightly-padded boxes still classify.
    for (std::size_t j = 0; j < p; ++j) {
        double lo = part.cells.front().lower[j];
        double hi = part.cells.front().upper[j];
        for (const auto& cell : part.cells) {
            lo = std::min(lo, cell.lower[j]);
            hi = std::max(hi, cell.upper[j]);
        }
        centroid[j] = std::clamp(centroid[j], lo, hi);
    }
    for (std::size_t i = 0; i < part.cells.size(); ++i)
        if (contains(part.cells[i], centroid)) return static_cast<int>(i);
    return -1;
}

} // namespace

MonteCarloReport monte_carlo(const SimulationSpec& spec, const McSolverConfig& solver,
                             std::size_t repetitions, const SubregionPartition& partition,
                             std::size_t workers) {
    if (repetitions < 1)
        throw std::invalid_argument("monte_carlo: need at least one repetition");
    MonteCarloReport report;
    report.repetitions = repetitions;
    report.per_rep.resize(repetitions);

    parallel_for(repetitions, workers, [&](std::size_t rep) {
        SimulationSpec rep_spec = spec;
        rep_spec.seed = mix_seed(spec.seed, mix_seed(kMcSalt, rep));
        Dataset data = generate(rep_spec);

        PenaltySchedule schedule = solver.penalty_schedule.empty()
                                       ? PenaltySchedule::default_for(data)
                                       : PenaltySchedule{solver.penalty_schedule};
        GAConfig ga = solver.ga;
        ga.seed = mix_seed(solver.ga.seed, mix_seed(kMcSalt + 1, rep));
        BootstrapConfig bs = solver.bootstrap;
        bs.seed = mix_seed(solver.bootstrap.seed, mix_seed(kMcSalt + 2, rep));

        FitResult fr = fit(data, solver.num_boxes, solver.beta, solver.gamma, schedule,
                           ga, bs, solver.seeding, 1);

        McRepResult r;
        r.seed = rep_spec.seed;
        r.feasible = fr.feasible;
        r.train_mean = fr.train_mean;
        r.coverage = fr.train_coverage;
        r.region = fr.region;
        r.cell = classify_region(fr.region, partition);
        report.per_rep[rep] = std::move(r);
    });

    report.cell_counts.assign(partition.cells.size() + 1, 0);
    for (const auto& r : report.per_rep) {
        std::size_t slot = r.cell >= 0 ? static_cast<std::size_t>(r.cell)
                                       : partition.cells.size();
        ++report.cell_counts[slot];
    }
    return report;
}

Oracle1DResult oracle_1d(const Dataset& d, double beta, double gamma,
                         const BootstrapConfig& bootstrap_cfg) {
    if (d.p() != 1)
        throw std::invalid_argument("oracle_1d: dataset must be one-dimensional");
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("oracle_1d: beta must be in [0,1)");
    const std::size_t n = d.n();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.row(a)[0] < d.row(b)[0];
    });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = d.row(order[i])[0];
        ys[i] = d.y(order[i]);
    }

    std::vector<double> prefix_y(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix_y[i + 1] = prefix_y[i] + ys[i];

    // First and last sorted position of each distinct value; intervals with
    // endpoints at distinct values therefore contain exact position ranges.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < n; ++i)
        if (i == 0 || xs[i] != xs[i - 1]) starts.push_back(i);
    std::size_t n_distinct = starts.size();
    auto last_of = [&](std::size_t v) {
        return (v + 1 < n_distinct ? starts[v + 1] : n) - 1;
    };

    const std::size_t kmin =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(beta * static_cast<double>(n) - 1e-9)));

    const std::size_t M = gamma > 0.0 ? bootstrap_cfg.replicates : 0;
    // Per-replicate prefix sums over sorted positions: count and y-sum of the
    // resampled rows at or before each position. Interval statistics for any
    // replicate are then O(1).
    std::vector<std::vector<double>> cnt_prefix(M), sum_prefix(M);
    std::vector<std::vector<std::size_t>> raw_draws(M);
    if (M > 0) {
        if (M < 2) throw std::invalid_argument("oracle_1d: bootstrap needs M >= 2");
        std::vector<std::size_t> pos_of_row(n);
        for (std::size_t i = 0; i < n; ++i) pos_of_row[order[i]] = i;
        for (std::size_t m = 0; m < M; ++m) {
            raw_draws[m] = bootstrap_indices(n, bootstrap_cfg.seed + m);
            std::vector<double> cnt(n, 0.0), sum(n, 0.0);
            for (std::size_t row : raw_draws[m]) {
                std::size_t pos = pos_of_row[row];
                cnt[pos] += 1.0;
                sum[pos] += d.y(row);
            }
            cnt_prefix[m].assign(n + 1, 0.0);
            sum_prefix[m].assign(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                cnt_prefix[m][i + 1] = cnt_prefix[m][i] + cnt[i];
                sum_prefix[m][i + 1] = sum_prefix[m][i] + sum[i];
            }
        }
    }

    std::vector<double> rep_means(M);
    bool found = false;
    Oracle1DResult best;
    double best_width = 0.0;

    // Bootstrap SD for the sorted position range [a, b]; false when a
    // replicate stays empty through every redraw.
    auto range_sd = [&](std::size_t a, std::size_t b, double& sd_out) {
        for (std::size_t m = 0; m < M; ++m) {
            double c = cnt_prefix[m][b + 1] - cnt_prefix[m][a];
            double s = sum_prefix[m][b + 1] - sum_prefix[m][a];
            if (c <= 0.0) {
                // Redraw exactly as bootstrap_sd would.
                bool ok = false;
                double lo = xs[a], hi = xs[b];
                for (std::size_t attempt = 1; attempt < 10 && !ok; ++attempt) {
                    Rng rng(bootstrap_cfg.seed + m + attempt * M);
                    s = 0.0;
                    c = 0.0;
                    for (std::size_t t = 0; t < n; ++t) {
                        std::size_t row = rng.uniform_index(n);
                        double xv = d.row(row)[0];
                        if (xv >= lo && xv <= hi) {
                            s += d.y(row);
                            c += 1.0;
                        }
                    }
                    ok = c > 0.0;
                }
                if (!ok) return false;
            }
            rep_means[m] = s / c;
        }
        double rep_mean = 0.0;
        for (double v : rep_means) rep_mean += v;
        rep_mean /= static_cast<double>(M);
        double ss = 0.0;
        for (double v : rep_means) {
            double dlt = v - rep_mean;
            ss += dlt * dlt;
        }
        sd_out = std::sqrt(ss / static_cast<double>(M - 1));
        return true;
    };

    auto consider = [&](std::size_t a, std::size_t b, double lo, double hi) {
        std::size_t count = b - a + 1;
        if (count < kmin) return;
        double mean = (prefix_y[b + 1] - prefix_y[a]) / static_cast<double>(count);
        double sd = 0.0;
        if (M > 0 && !range_sd(a, b, sd)) return;

        double objective = mean - gamma * sd;
        double width = hi - lo;
        bool better = false;
        if (!found || objective > best.objective) {
            better = true;
        } else if (objective == best.objective) {
            if (width < best_width)
                better = true;
            else if (width == best_width && lo < best.interval.lower[0])
                better = true;
        }
        if (better) {
            found = true;
            best.interval = HyperRectangle{{lo}, {hi}};
            best.objective = objective;
            best.mean = mean;
            best.sd = sd;
            best.coverage = static_cast<double>(count) / static_cast<double>(n);
            best.inside_count = count;
            best_width = width;
        }
    };

    for (std::size_t vi = 0; vi < n_distinct; ++vi) {
        std::size_t a = starts[vi];
        for (std::size_t vj = vi + 1; vj < n_distinct; ++vj) {
            std::size_t b = last_of(vj);
            consider(a, b, xs[a], xs[b]);
        }
    }
    // Membership sets holding a single distinct value are reachable with a
    // thin box strictly between the neighbouring values; without these the
    // search space would miss the tightest regions once kmin is small.
    for (std::size_t vi = 0; vi < n_distinct; ++vi) {
        std::size_t a = starts[vi];
        std::size_t b = last_of(vi);
        double v = xs[a];
        double lo = vi > 0 ? 0.5 * (xs[last_of(vi - 1)] + v) : v - 1.0;
        double hi = vi + 1 < n_distinct ? 0.5 * (v + xs[starts[vi + 1]]) : v + 1.0;
        consider(a, b, lo, hi);
    }
    if (!found)
        throw std::runtime_error("oracle_1d: no interval satisfies the coverage floor");
    return best;
}

RegionUnion separate_axes_baseline(const Dataset& d, double per_axis_beta) {
    if (d.p() != 2)
        throw std::invalid_argument("separate_axes_baseline: dataset must be two-dimensional");
    HyperRectangle box;
    box.lower.resize(2);
    box.upper.resize(2);
    for (std::size_t axis = 0; axis < 2; ++axis) {
        std::vector<double> xa(d.n());
        for (std::size_t i = 0; i < d.n(); ++i) xa[i] = d.row(i)[axis];
        Dataset marginal(d.y_values(), std::move(xa),
                         {d.feature_names()[axis]}, d.response_name());
        Oracle1DResult r = oracle_1d(marginal, per_axis_beta, 0.0, BootstrapConfig{2, 0});
        box.lower[axis] = r.interval.lower[0];
        box.upper[axis] = r.interval.upper[0];
    }
    RegionUnion region;
    region.p = 2;
    region.boxes.push_back(std::move(box));
    return region;
}

} // namespace envelope::sim
