#include "envelope/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "envelope/parallel.hpp"
#include "envelope/rng.hpp"

namespace envelope {

namespace {

constexpr std::uint64_t kFitSalt = 0x666974ULL;
constexpr std::uint64_t kCvSalt = 0x6376ULL;

} // namespace

PenaltySchedule PenaltySchedule::default_for(const Dataset& d) {
    double range = d.y_max() - d.y_min();
    double scale = range > 0.0 ? range : 1.0;
    return PenaltySchedule{{1.0 * scale, 10.0 * scale, 100.0 * scale, 1000.0 * scale}};
}

void PenaltySchedule::validate() const {
    if (values.empty())
        throw std::invalid_argument("PenaltySchedule: schedule is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0))
            throw std::invalid_argument("PenaltySchedule: penalty weights must be positive");
        if (i > 0 && !(values[i] > values[i - 1]))
            throw std::invalid_argument("PenaltySchedule: values must be strictly increasing");
    }
}

FitResult fit(const Dataset& train, std::size_t num_boxes, double beta, double gamma,
              const PenaltySchedule& schedule, const GAConfig& ga_cfg,
              const BootstrapConfig& bootstrap_cfg, BootstrapSeeding seeding,
              std::size_t workers) {
    schedule.validate();
    if (train.n() < 2)
        throw std::invalid_argument("fit: need at least 2 training rows");
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("fit: beta must be in [0,1)");

    DomainBounds bounds = DomainBounds::from_data(train);

    struct Attempt {
        bool feasible = false;
        RegionUnion region;
        RegionEstimate est;
        double sd = 0.0;
        double objective = 0.0;
        double c = 0.0;
        GARun ga;
    };

    std::vector<Attempt> attempts(schedule.values.size());
    for (std::size_t t = 0; t < schedule.values.size(); ++t) {
        Attempt& at = attempts[t];
        at.c = schedule.values[t];

        ObjectiveConfig obj;
        obj.beta = beta;
        obj.penalty_weight = at.c;
        obj.gamma = gamma;
        obj.bootstrap = bootstrap_cfg;
        obj.seeding = seeding;
        FitnessEvaluator evaluator(train, obj, num_boxes);

        GAConfig ga = ga_cfg;
        ga.seed = mix_seed(ga_cfg.seed, mix_seed(kFitSalt, t));
        at.ga = run_ga([&evaluator](const ParamVector& v) { return evaluator.fitness(v); },
                       bounds, num_boxes, ga, workers);

        std::optional<RegionUnion> region = decode(at.ga.best_vector, num_boxes, train.p());
        if (!region) continue;
        at.region = *region;
        at.est = estimate(train, at.region);
        if (!at.est.mean) continue;
        at.feasible = at.est.coverage >= beta;
        if (!at.feasible) continue;
        // Reported SD always uses the plain bootstrap seed so the objective
        // is comparable across fits and with external enumeration.
        try {
            at.sd = bootstrap_sd(train, at.region, bootstrap_cfg);
        } catch (const std::exception&) {
            if (gamma > 0.0) {
                // Objective undefined without an SD estimate; drop the entry.
                at.feasible = false;
                continue;
            }
            at.sd = 0.0;
        }
        at.objective = *at.est.mean - gamma * at.sd;
    }

    const Attempt* chosen = nullptr;
    for (const Attempt& at : attempts)
        if (at.feasible && (!chosen || at.objective > chosen->objective)) chosen = &at;

    FitResult out;
    if (!chosen) {
        // No feasible entry: report the attempt that came closest in coverage.
        const Attempt* best = nullptr;
        for (const Attempt& at : attempts)
            if (at.est.mean && (!best || at.est.coverage > best->est.coverage)) best = &at;
        if (!best) best = &attempts.front();
        out.feasible = false;
        out.region = best->region;
        out.train_mean = best->est.mean.value_or(0.0);
        out.train_coverage = best->est.coverage;
        out.train_sd = best->sd;
        out.objective = best->objective;
        out.chosen_c = best->c;
        out.ga = best->ga;
        return out;
    }
    out.feasible = true;
    out.region = chosen->region;
    out.train_mean = *chosen->est.mean;
    out.train_coverage = chosen->est.coverage;
    out.train_sd = chosen->sd;
    out.objective = chosen->objective;
    out.chosen_c = chosen->c;
    out.ga = chosen->ga;
    return out;
}

std::vector<CVReport> cross_validate(const Dataset& d, std::size_t num_boxes,
                                     double beta, const GammaGrid& grid, int k,
                                     const PenaltySchedule& schedule,
                                     const GAConfig& ga_cfg,
                                     const BootstrapConfig& bootstrap_cfg,
                                     std::uint64_t seed, CvMode mode,
                                     BootstrapSeeding seeding, std::size_t workers) {
    if (grid.values.empty())
        throw std::invalid_argument("cross_validate: gamma grid is empty");
    FoldAssignment folds = kfold(d, k, seed);

    std::size_t n_gamma = grid.values.size();
    std::size_t n_jobs = n_gamma * static_cast<std::size_t>(k);

    struct JobResult {
        std::optional<double> test_mean;
        RegionUnion region;
        bool feasible = false;
    };
    std::vector<JobResult> results(n_jobs);

    parallel_for(n_jobs, workers, [&](std::size_t job) {
        std::size_t gi = job / static_cast<std::size_t>(k);
        int fold = static_cast<int>(job % static_cast<std::size_t>(k));

        std::vector<std::size_t> train_rows = mode == CvMode::holdout
                                                  ? folds.rows_not_in_fold(fold)
                                                  : folds.rows_in_fold(fold);
        std::vector<std::size_t> test_rows = mode == CvMode::holdout
                                                 ? folds.rows_in_fold(fold)
                                                 : folds.rows_not_in_fold(fold);
        Dataset train = d.subset(train_rows);
        Dataset test = d.subset(test_rows);

        GAConfig ga = ga_cfg;
        ga.seed = mix_seed(seed, mix_seed(kCvSalt, job));
        BootstrapConfig bs = bootstrap_cfg;
        bs.seed = mix_seed(seed, mix_seed(kCvSalt + 1, job));

        FitResult fr = fit(train, num_boxes, beta, grid.values[gi], schedule, ga, bs,
                           seeding, 1);
        JobResult jr;
        jr.region = fr.region;
        jr.feasible = fr.feasible;
        if (!fr.region.boxes.empty()) {
            RegionEstimate est = evaluate(test, fr.region);
            jr.test_mean = est.mean;
        }
        results[job] = std::move(jr);
    });

    std::vector<CVReport> reports(n_gamma);
    for (std::size_t gi = 0; gi < n_gamma; ++gi) {
        CVReport& rep = reports[gi];
        rep.gamma = grid.values[gi];
        rep.fold_test_means.resize(k);
        rep.fold_regions.resize(k);
        rep.fold_feasible.resize(k);
        std::vector<double> defined;
        for (int f = 0; f < k; ++f) {
            const JobResult& jr = results[gi * k + f];
            rep.fold_test_means[f] = jr.test_mean;
            rep.fold_regions[f] = jr.region;
            rep.fold_feasible[f] = jr.feasible;
            if (jr.test_mean)
                defined.push_back(*jr.test_mean);
            else
                ++rep.empty_folds;
        }
        if (!defined.empty()) {
            double mean = 0.0;
            for (double v : defined) mean += v;
            mean /= static_cast<double>(defined.size());
            if (mean > 0.0) rep.bias = 1.0 / mean;
            if (defined.size() >= 2) {
                double ss = 0.0;
                for (double v : defined) {
                    double dlt = v - mean;
                    ss += dlt * dlt;
                }
                rep.variance = ss / static_cast<double>(defined.size() - 1);
            }
        }
    }
    return reports;
}

double select_gamma(const std::vector<CVReport>& reports, const GammaPolicy& policy) {
    if (policy.kind == GammaPolicy::Kind::manual) return policy.manual_value;
    std::vector<const CVReport*> usable;
    for (const auto& r : reports)
        if (r.variance) usable.push_back(&r);
    if (usable.empty())
        throw std::runtime_error("select_gamma: no report has a defined variance");
    std::sort(usable.begin(), usable.end(),
              [](const CVReport* a, const CVReport* b) { return a->gamma < b->gamma; });

    switch (policy.kind) {
        case GammaPolicy::Kind::earliest_min_variance: {
            double vmin = (*usable.front()).variance.value();
            for (const auto* r : usable) vmin = std::min(vmin, r->variance.value());
            for (const auto* r : usable)
                if (r->variance.value() <= vmin + policy.tolerance) return r->gamma;
            return usable.back()->gamma; // unreachable
        }
        case GammaPolicy::Kind::min_variance: {
            const CVReport* best = usable.front();
            for (const auto* r : usable)
                if (r->variance.value() < best->variance.value()) best = r;
            return best->gamma;
        }
        case GammaPolicy::Kind::knee: {
            if (usable.size() < 2) return usable.front()->gamma;
            const CVReport* best = usable[1];
            double best_drop = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < usable.size(); ++i) {
                double step = usable[i]->gamma - usable[i - 1]->gamma;
                if (step <= 0.0) continue;
                double drop =
                    (usable[i - 1]->variance.value() - usable[i]->variance.value()) / step;
                if (drop > best_drop) {
                    best_drop = drop;
                    best = usable[i];
                }
            }
            return best->gamma;
        }
        case GammaPolicy::Kind::manual:
            break;
    }
    return policy.manual_value;
}

RegionEstimate evaluate(const Dataset& test, const RegionUnion& r) {
    return estimate(test, r);
}

} // namespace envelope
