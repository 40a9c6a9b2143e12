#ifndef ENVELOPE_MODEL_SELECTION_HPP
#define ENVELOPE_MODEL_SELECTION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "envelope/dataset.hpp"
#include "envelope/estimation.hpp"
#include "envelope/ga.hpp"
#include "envelope/objective.hpp"
#include "envelope/region.hpp"

namespace envelope {

// Strictly increasing candidate penalty weights. The default schedule is
// {1, 10, 100, 1000} scaled by the response range, so the hinge term can
// dominate the objective at the top of the schedule.
struct PenaltySchedule {
    std::vector<double> values;

    static PenaltySchedule default_for(const Dataset& d);
    void validate() const;
};

struct GammaGrid {
    std::vector<double> values;
};

struct FitResult {
    bool feasible = false;
    RegionUnion region;
    double train_mean = 0.0;
    double train_coverage = 0.0;
    double train_sd = 0.0;       // bootstrap SD of the final region's mean
    double objective = 0.0;      // train_mean - gamma * train_sd
    double chosen_c = 0.0;
    GARun ga;
};

// Which side of a fold partition each cross-validation job trains on.
//
//  holdout:    train on the k-1 complementary folds, test on the fold.
//  fold_train: train on the single fold, test on the complement; the k
//      training sets are then disjoint, which matches the variance notion
//      "variability across different training data sets" directly.
enum class CvMode { holdout, fold_train };

struct CVReport {
    double gamma = 0.0;
    std::vector<std::optional<double>> fold_test_means; // empty entry = no test point in region
    std::optional<double> bias;      // 1 / mean of defined fold means, if that mean > 0
    std::optional<double> variance;  // sample variance of defined fold means (>= 2 needed)
    std::size_t empty_folds = 0;
    std::vector<RegionUnion> fold_regions;
    std::vector<bool> fold_feasible;
};

struct GammaPolicy {
    enum class Kind {
        earliest_min_variance, // smallest gamma with variance within tolerance of the minimum
        min_variance,          // gamma attaining the minimum variance
        knee,                  // largest variance drop per unit gamma step
        manual
    };
    Kind kind = Kind::earliest_min_variance;
    double manual_value = 0.0;
    double tolerance = 1e-12;
};

/**
 * Penalty-method fit at a fixed regularization weight: one GA maximization
 * of the penalized fitness per schedule entry c_t (GA seed derived per
 * entry), keeping the feasible entry (coverage >= beta) with the largest
 * unpenalized regularized objective, ties toward the smaller c.
 *
 * When no schedule entry yields a feasible region the result carries
 * feasible = false and the attempt with the highest coverage.
 */
FitResult fit(const Dataset& train, std::size_t num_boxes, double beta, double gamma,
              const PenaltySchedule& schedule, const GAConfig& ga_cfg,
              const BootstrapConfig& bootstrap_cfg,
              BootstrapSeeding seeding = BootstrapSeeding::per_candidate,
              std::size_t workers = 1);

/**
 * Per-gamma k-fold bias/variance estimation: for every gamma and fold, fit
 * on the fold's training side and evaluate the in-region response mean on
 * the held-out side. Folds whose held-out data has no point inside the
 * fitted region are excluded from the bias/variance aggregates and counted
 * in empty_folds. Fold-level jobs are independent, seeded per (gamma, fold),
 * and may run in parallel; reports do not depend on scheduling.
 */
std::vector<CVReport> cross_validate(const Dataset& d, std::size_t num_boxes,
                                     double beta, const GammaGrid& grid, int k,
                                     const PenaltySchedule& schedule,
                                     const GAConfig& ga_cfg,
                                     const BootstrapConfig& bootstrap_cfg,
                                     std::uint64_t seed,
                                     CvMode mode = CvMode::holdout,
                                     BootstrapSeeding seeding = BootstrapSeeding::per_candidate,
                                     std::size_t workers = 1);

// Applies the policy over reports; reports with undefined variance are
// skipped. Throws if nothing is selectable.
double select_gamma(const std::vector<CVReport>& reports, const GammaPolicy& policy);

// Held-out evaluation of a fitted region.
RegionEstimate evaluate(const Dataset& test, const RegionUnion& r);

} // namespace envelope

#endif // ENVELOPE_MODEL_SELECTION_HPP
